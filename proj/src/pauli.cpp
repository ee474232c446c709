#include "ctx/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

namespace ctx {
namespace {

Matrix single_qubit(char letter) {
  Matrix m(2, 2);
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw ParseError("invalid Pauli letter", 0);
  }
  return m;
}

std::string format_coeff(double c) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", c);
  return buf;
}

}  // namespace

PauliWord::PauliWord(std::string letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw Error("Pauli word must have length >= 1");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    char c = letters_[i];
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      throw ParseError(std::string("invalid Pauli letter '") + c + "'", i);
  }
}

bool PauliWord::is_identity() const {
  return letters_.find_first_not_of('I') == std::string::npos;
}

Matrix PauliWord::to_dense() const {
  Matrix m = single_qubit(letters_[0]);
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    const Matrix f = single_qubit(letters_[i]);
    Matrix out(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        out.block(2 * r, 2 * c, 2, 2) = m(r, c) * f;
    m = std::move(out);
  }
  return m;
}

bool PauliWord::commutes_with(const PauliWord& other) const {
  if (letters_.size() != other.letters_.size())
    throw DimensionError("Pauli words of different length");
  int anti = 0;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    char a = letters_[i], b = other.letters_[i];
    if (a != 'I' && b != 'I' && a != b) ++anti;
  }
  return anti % 2 == 0;
}

OperatorExpr::OperatorExpr(std::vector<ExprTerm> terms) {
  if (terms.empty()) throw Error("empty operator expression");
  n_qubits_ = terms.front().word.n_qubits();
  std::map<std::string, double> merged;
  for (const auto& t : terms) {
    if (t.word.n_qubits() != n_qubits_)
      throw Error("mixed word lengths in expression");
    merged[t.word.letters()] += t.coeff;
  }
  for (const auto& [w, c] : merged) {
    if (c != 0.0) terms_.push_back({c, PauliWord(w)});
  }
  if (terms_.empty()) {
    // the zero operator keeps one explicit zero identity term
    terms_.push_back({0.0, PauliWord(std::string(n_qubits_, 'I'))});
  }
}

Matrix OperatorExpr::to_dense() const {
  const Eigen::Index d = Eigen::Index(1) << n_qubits_;
  Matrix m = Matrix::Zero(d, d);
  for (const auto& t : terms_) m += t.coeff * t.word.to_dense();
  return m;
}

std::string OperatorExpr::str() const {
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    double c = t.coeff;
    if (i == 0) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    double mag = std::abs(c);
    if (mag != 1.0) out += format_coeff(mag) + "*";
    out += t.word.letters();
  }
  return out;
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
};

bool is_word_char(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

double parse_atom(Cursor& cur) {
  cur.skip_ws();
  if (cur.text.substr(cur.pos, 5) == "sqrt2") {
    cur.pos += 5;
    return std::sqrt(2.0);
  }
  std::size_t start = cur.pos;
  std::size_t i = cur.pos;
  if (i < cur.text.size() && (cur.text[i] == '+' || cur.text[i] == '-')) ++i;
  bool digits = false;
  while (i < cur.text.size() &&
         (std::isdigit(static_cast<unsigned char>(cur.text[i])) || cur.text[i] == '.')) {
    digits = digits || std::isdigit(static_cast<unsigned char>(cur.text[i]));
    ++i;
  }
  if (i < cur.text.size() && (cur.text[i] == 'e' || cur.text[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < cur.text.size() && (cur.text[j] == '+' || cur.text[j] == '-')) ++j;
    std::size_t k = j;
    while (k < cur.text.size() && std::isdigit(static_cast<unsigned char>(cur.text[k]))) ++k;
    if (k > j) i = k;
  }
  if (!digits) throw ParseError("expected a number", start);
  double v = std::strtod(std::string(cur.text.substr(start, i - start)).c_str(), nullptr);
  cur.pos = i;
  return v;
}

std::string parse_word(Cursor& cur) {
  cur.skip_ws();
  std::size_t start = cur.pos;
  std::string w;
  while (cur.pos < cur.text.size() && is_word_char(cur.text[cur.pos])) {
    w += cur.text[cur.pos];
    ++cur.pos;
  }
  if (w.empty()) throw ParseError("expected a Pauli word", start);
  return w;
}

ExprTerm parse_term(Cursor& cur, double outer_sign) {
  cur.skip_ws();
  double sign = 1.0;
  char c = cur.peek();
  if (c == '-' || c == '+') {
    sign = c == '-' ? -1.0 : 1.0;
    ++cur.pos;
    c = cur.peek();
  }
  double coeff = 1.0;
  bool has_number = std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
                    cur.text.substr(cur.pos, 5) == "sqrt2";
  if (has_number) {
    coeff = parse_atom(cur);
    if (cur.peek() == '/') {
      ++cur.pos;
      double den = parse_atom(cur);
      if (den == 0.0) throw ParseError("division by zero", cur.pos);
      coeff /= den;
    }
    if (cur.peek() != '*')
      throw ParseError("expected '*' between coefficient and word", cur.pos);
    ++cur.pos;
  }
  std::string w = parse_word(cur);
  return {outer_sign * sign * coeff, PauliWord(w)};
}

}  // namespace

OperatorExpr OperatorExpr::parse(std::string_view text) {
  Cursor cur{text};
  if (cur.done()) throw ParseError("empty input", 0);
  std::vector<ExprTerm> terms;
  terms.push_back(parse_term(cur, 1.0));
  while (!cur.done()) {
    char c = cur.peek();
    double sign;
    if (c == '+') {
      sign = 1.0;
      ++cur.pos;
    } else if (c == '-') {
      // distinguish the separator from a signed coefficient: the separator
      // form "a - b" and the signed form "a + -b" parse identically
      sign = -1.0;
      ++cur.pos;
    } else {
      throw ParseError("expected '+' or '-'", cur.pos);
    }
    terms.push_back(parse_term(cur, sign));
  }
  return OperatorExpr(std::move(terms));
}

OperatorExpr OperatorExpr::from_dense(const Matrix& op, double drop_tol) {
  const Eigen::Index d = op.rows();
  if (op.cols() != d) throw DimensionError("from_dense requires a square matrix");
  int n = 0;
  while ((Eigen::Index(1) << n) < d) ++n;
  if ((Eigen::Index(1) << n) != d)
    throw DimensionError("from_dense requires a power-of-2 dimension");
  if (n == 0) throw DimensionError("from_dense requires at least one qubit");

  std::vector<ExprTerm> terms;
  const char letters[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<int> idx(n, 0);
  const auto total = static_cast<std::size_t>(std::pow(4.0, n));
  for (std::size_t count = 0; count < total; ++count) {
    std::string w;
    std::size_t rem = count;
    for (int q = 0; q < n; ++q) {
      w += letters[rem % 4];
      rem /= 4;
    }
    std::reverse(w.begin(), w.end());
    PauliWord word(w);
    Complex overlap = (word.to_dense() * op).trace() / double(d);
    if (std::abs(overlap.imag()) > drop_tol)
      throw Error("operator has a non-real Pauli coefficient: " + w);
    if (std::abs(overlap.real()) > drop_tol)
      terms.push_back({overlap.real(), word});
  }
  if (terms.empty()) terms.push_back({0.0, PauliWord(std::string(n, 'I'))});
  return OperatorExpr(std::move(terms));
}

}  // namespace ctx
