#include "motint/hodge.hpp"

#include "motint/error.hpp"
#include "motint/expr.hpp"

namespace motint {

HodgeRational::HodgeRational(const MotClass& w_piece) { add_piece(0, w_piece); }

HodgeRational HodgeRational::u() {
  HodgeRational h;
  h.add_piece(1, MotClass(1));
  return h;
}

HodgeRational HodgeRational::v() {
  HodgeRational h;
  h.add_piece(-1, MotClass(1));
  return h;
}

void HodgeRational::add_piece(long delta, const MotClass& piece) {
  if (piece.is_zero()) return;
  auto [it, inserted] = pieces_.try_emplace(delta, piece);
  if (!inserted) {
    it->second += piece;
    if (it->second.is_zero()) pieces_.erase(it);
  }
}

HodgeRational& HodgeRational::operator+=(const HodgeRational& other) {
  for (const auto& [delta, piece] : other.pieces_) add_piece(delta, piece);
  return *this;
}

HodgeRational& HodgeRational::operator-=(const HodgeRational& other) { return *this += -other; }

HodgeRational operator-(HodgeRational a) {
  for (auto& [delta, piece] : a.pieces_) piece = -piece;
  return a;
}

// u^a * u^b: for opposite signs the cancelled part becomes a power of w,
// e.g. u * v = w, u^2 * v = w * u.
HodgeRational operator*(const HodgeRational& a, const HodgeRational& b) {
  HodgeRational out;
  for (const auto& [da, pa] : a.pieces_) {
    for (const auto& [db, pb] : b.pieces_) {
      long w_shift = 0;
      if ((da > 0 && db < 0) || (da < 0 && db > 0)) w_shift = std::min(std::labs(da), std::labs(db));
      out.add_piece(da + db, pa * pb * MotClass::L_pow(w_shift));
    }
  }
  return out;
}

bool operator==(const HodgeRational& a, const HodgeRational& b) {
  auto ia = a.pieces_.begin();
  auto ib = b.pieces_.begin();
  for (; ia != a.pieces_.end() && ib != b.pieces_.end(); ++ia, ++ib)
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  return ia == a.pieces_.end() && ib == b.pieces_.end();
}

mpq_class HodgeRational::euler_characteristic() const {
  mpq_class total = 0;
  for (const auto& [delta, piece] : pieces_) total += chi_realize(piece);
  return total;
}

std::string HodgeRational::to_string() const {
  if (pieces_.empty()) return "0";
  std::string out;
  // u-free part first, then u powers, then v powers.
  auto emit = [&](long delta, const MotClass& piece) {
    std::string body = piece.to_string("w");
    if (!out.empty()) out += " + ";
    if (delta == 0) {
      out += body;
      return;
    }
    std::string mono = delta > 0 ? "u" : "v";
    long k = std::labs(delta);
    if (k != 1) mono += "^" + std::to_string(k);
    if (body == "1") {
      out += mono;
    } else {
      out += "(" + body + ")*" + mono;
    }
  };
  if (auto it = pieces_.find(0); it != pieces_.end()) emit(0, it->second);
  for (const auto& [delta, piece] : pieces_)
    if (delta > 0) emit(delta, piece);
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it)
    if (it->first < 0) emit(it->first, it->second);
  return out;
}

HodgeRational hodge_realize(const MotClass& a) { return HodgeRational(a); }

namespace {

HodgeRational evaluate_hodge(const expr::Node& node) {
  using expr::Kind;
  switch (node.kind) {
    case Kind::Number:
      return HodgeRational(MotClass(LaurentPoly::monomial(node.number, 0)));
    case Kind::Symbol:
      if (node.symbol == "u") return HodgeRational::u();
      if (node.symbol == "v") return HodgeRational::v();
      if (node.symbol == "w") return HodgeRational(MotClass::L());
      expr::fail(node, "unknown symbol '" + node.symbol + "' (expected u, v or w)");
    case Kind::Add:
      return evaluate_hodge(*node.children[0]) + evaluate_hodge(*node.children[1]);
    case Kind::Sub:
      return evaluate_hodge(*node.children[0]) - evaluate_hodge(*node.children[1]);
    case Kind::Neg:
      return -evaluate_hodge(*node.children[0]);
    case Kind::Mul:
      return evaluate_hodge(*node.children[0]) * evaluate_hodge(*node.children[1]);
    case Kind::Pow: {
      HodgeRational base = evaluate_hodge(*node.children[0]);
      if (node.exponent < 0) {
        // Only w-monomials are units; u and v alone are not invertible here.
        if (base.pieces().size() != 1 || base.pieces().begin()->first != 0)
          expr::fail(node, "negative exponents are only allowed on powers of w");
        const MotClass& piece = base.pieces().begin()->second;
        if (!invert(piece)) expr::fail(node, "negative exponent of a non-invertible function of w");
        return HodgeRational(power(piece, node.exponent));
      }
      HodgeRational out(MotClass(1));
      for (long i = 0; i < node.exponent; ++i) out = out * base;
      return out;
    }
    case Kind::Div: {
      HodgeRational numerator = evaluate_hodge(*node.children[0]);
      HodgeRational divisor = evaluate_hodge(*node.children[1]);
      if (divisor.pieces().size() != 1 || divisor.pieces().begin()->first != 0)
        expr::fail(*node.children[1], "denominator must be a function of w = uv alone");
      auto reciprocal = invert(divisor.pieces().begin()->second);
      if (!reciprocal) expr::fail(*node.children[1], "denominator must be a product of (w^i - 1) and powers of w");
      return numerator * HodgeRational(*reciprocal);
    }
  }
  expr::fail(node, "unsupported expression");
}

}  // namespace

HodgeRational parse_hodge(std::string_view text) {
  auto root = expr::parse(text);
  return evaluate_hodge(*root);
}

}  // namespace motint
