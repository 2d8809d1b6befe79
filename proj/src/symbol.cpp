#include "polytoep/symbol.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "polytoep/errors.hpp"

namespace polytoep {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw DimensionMismatch(msg);
}

Complex int_pow(Complex z, int e) {
  if (e == 0) return 1.0;
  if (e < 0) {
    if (z == Complex(0.0)) throw Error("eval: zero coordinate meets negative exponent");
    return 1.0 / int_pow(z, -e);
  }
  Complex r = 1.0;
  Complex b = z;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(nd(rng), nd(rng)) / std::sqrt(2.0);
  return m;
}

// dim_out x dim_in matrix with orthonormal columns.
Matrix random_isometry(int rows, int cols, std::mt19937_64& rng) {
  Matrix g = gaussian(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  return q;
}

MultiIndex random_exponent(int n, int bound, std::mt19937_64& rng, VarSet allowed) {
  std::uniform_int_distribution<int> ud(0, bound);
  MultiIndex k = MultiIndex::zeros(n);
  for (int i = 0; i < n; ++i)
    if (allowed.contains(i)) k[i] = ud(rng);
  return k;
}

VarSet support_vars(const MultiIndex& k) {
  VarSet s;
  for (int i = 0; i < k.size(); ++i)
    if (k[i] != 0) s = s.with(i);
  return s;
}

// Largest |A_{l+e_i} B_{m+e_i}^*| over all i and support pairs.
double shifted_product_max(const LaurentSymbol& g, const LaurentSymbol& p) {
  double worst = 0.0;
  for (const auto& [kl, a] : g.terms())
    for (const auto& [km, b] : p.terms())
      for (int i = 0; i < g.n(); ++i)
        if (kl[i] >= 1 && km[i] >= 1) worst = std::max(worst, max_abs(a * b.adjoint()));
  return worst;
}

}  // namespace

LaurentSymbol::LaurentSymbol(int n, int dim_out, int dim_in)
    : n_(n), dim_out_(dim_out), dim_in_(dim_in) {
  if (n < 1 || dim_out < 1 || dim_in < 1) throw DimensionMismatch("symbol: n and dims must be >= 1");
}

LaurentSymbol::LaurentSymbol(int n, int dim_out, int dim_in,
                             const std::vector<std::pair<MultiIndex, Matrix>>& terms)
    : LaurentSymbol(n, dim_out, dim_in) {
  for (const auto& [k, c] : terms) {
    require(k.size() == n, "symbol: exponent length " + std::to_string(k.size()) +
                               " != n = " + std::to_string(n));
    require(c.rows() == dim_out && c.cols() == dim_in, "symbol: coefficient shape mismatch at " +
                                                           k.to_string());
    auto it = terms_.find(k);
    if (it == terms_.end())
      terms_.emplace(k, c);
    else
      it->second += c;
  }
  std::erase_if(terms_, [](const auto& kv) { return max_abs(kv.second) <= kCanonicalDrop; });
}

LaurentSymbol LaurentSymbol::constant(int n, const Matrix& c) {
  return LaurentSymbol(n, static_cast<int>(c.rows()), static_cast<int>(c.cols()),
                       {{MultiIndex::zeros(n), c}});
}

LaurentSymbol LaurentSymbol::monomial(const MultiIndex& k, const Matrix& c) {
  return LaurentSymbol(k.size(), static_cast<int>(c.rows()), static_cast<int>(c.cols()),
                       {{k, c}});
}

bool LaurentSymbol::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
}

bool LaurentSymbol::is_analytic() const {
  for (const auto& kv : terms_)
    if (!kv.first.is_nonnegative()) return false;
  return true;
}

MultiIndex LaurentSymbol::band_radius() const {
  return cwise_max(upward_reach(), downward_reach());
}

MultiIndex LaurentSymbol::upward_reach() const {
  MultiIndex r = MultiIndex::zeros(n_);
  for (const auto& kv : terms_)
    for (int i = 0; i < n_; ++i) r[i] = std::max(r[i], kv.first[i]);
  return r;
}

MultiIndex LaurentSymbol::downward_reach() const {
  MultiIndex r = MultiIndex::zeros(n_);
  for (const auto& kv : terms_)
    for (int i = 0; i < n_; ++i) r[i] = std::max(r[i], -kv.first[i]);
  return r;
}

VarSet LaurentSymbol::variables() const {
  VarSet s;
  for (const auto& kv : terms_) s = s | support_vars(kv.first);
  return s;
}

Matrix LaurentSymbol::coefficient(const MultiIndex& k) const {
  auto it = terms_.find(k);
  if (it == terms_.end()) return Matrix::Zero(dim_out_, dim_in_);
  return it->second;
}

LaurentSymbol LaurentSymbol::operator+(const LaurentSymbol& o) const {
  require(n_ == o.n_ && dim_out_ == o.dim_out_ && dim_in_ == o.dim_in_, "symbol +: shape mismatch");
  std::vector<std::pair<MultiIndex, Matrix>> t(terms_.begin(), terms_.end());
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return LaurentSymbol(n_, dim_out_, dim_in_, t);
}

LaurentSymbol LaurentSymbol::operator-(const LaurentSymbol& o) const { return *this + o.scaled(-1.0); }

LaurentSymbol LaurentSymbol::scaled(Complex s) const {
  std::vector<std::pair<MultiIndex, Matrix>> t;
  for (const auto& [k, c] : terms_) t.emplace_back(k, s * c);
  return LaurentSymbol(n_, dim_out_, dim_in_, t);
}

LaurentSymbol LaurentSymbol::right_multiply(const Matrix& c) const {
  require(c.rows() == dim_in_, "right_multiply: shape mismatch");
  std::vector<std::pair<MultiIndex, Matrix>> t;
  for (const auto& [k, a] : terms_) t.emplace_back(k, a * c);
  return LaurentSymbol(n_, dim_out_, static_cast<int>(c.cols()), t);
}

LaurentSymbol LaurentSymbol::left_multiply(const Matrix& c) const {
  require(c.cols() == dim_out_, "left_multiply: shape mismatch");
  std::vector<std::pair<MultiIndex, Matrix>> t;
  for (const auto& [k, a] : terms_) t.emplace_back(k, c * a);
  return LaurentSymbol(n_, static_cast<int>(c.rows()), dim_in_, t);
}

double max_coefficient_distance(const LaurentSymbol& a, const LaurentSymbol& b) {
  require(a.n() == b.n() && a.dim_out() == b.dim_out() && a.dim_in() == b.dim_in(),
          "coefficient distance: shape mismatch");
  double worst = 0.0;
  for (const auto& [k, c] : a.terms()) worst = std::max(worst, max_abs(c - b.coefficient(k)));
  for (const auto& [k, c] : b.terms())
    if (!a.terms().count(k)) worst = std::max(worst, max_abs(c));
  return worst;
}

Matrix eval(const LaurentSymbol& phi, const Point& z) {
  require(static_cast<int>(z.size()) == phi.n(),
          "eval: point has " + std::to_string(z.size()) + " coordinates, symbol n = " +
              std::to_string(phi.n()));
  Matrix out = Matrix::Zero(phi.dim_out(), phi.dim_in());
  for (const auto& [k, c] : phi.terms()) {
    Complex w = 1.0;
    for (int i = 0; i < phi.n(); ++i) w *= int_pow(z[i], k[i]);
    out += w * c;
  }
  return out;
}

LaurentSymbol adjoint_symbol(const LaurentSymbol& phi) {
  std::vector<std::pair<MultiIndex, Matrix>> t;
  for (const auto& [k, c] : phi.terms()) t.emplace_back(-k, c.adjoint());
  return LaurentSymbol(phi.n(), phi.dim_in(), phi.dim_out(), t);
}

LaurentSymbol multiply(const LaurentSymbol& phi, const LaurentSymbol& psi) {
  require(phi.n() == psi.n(), "multiply: n mismatch");
  require(phi.dim_in() == psi.dim_out(),
          "multiply: inner dims " + std::to_string(phi.dim_in()) + " vs " +
              std::to_string(psi.dim_out()));
  std::map<MultiIndex, Matrix> acc;
  for (const auto& [ka, a] : phi.terms())
    for (const auto& [kb, b] : psi.terms()) {
      MultiIndex k = ka + kb;
      auto it = acc.find(k);
      if (it == acc.end())
        acc.emplace(k, a * b);
      else
        it->second.noalias() += a * b;
    }
  return LaurentSymbol(phi.n(), phi.dim_out(), psi.dim_in(),
                       std::vector<std::pair<MultiIndex, Matrix>>(acc.begin(), acc.end()));
}

LaurentSymbol restrict_zero(const LaurentSymbol& phi, VarSet vars) {
  if (!phi.is_analytic()) throw NotAnalytic("restrict_zero: symbol has negative exponents");
  std::vector<std::pair<MultiIndex, Matrix>> t;
  for (const auto& [k, c] : phi.terms()) {
    bool keep = true;
    for (int i : vars.members())
      if (i < phi.n() && k[i] != 0) keep = false;
    if (keep) t.emplace_back(k, c);
  }
  return LaurentSymbol(phi.n(), phi.dim_out(), phi.dim_in(), t);
}

InnerCertificate is_inner(const LaurentSymbol& theta, double tol) {
  LaurentSymbol gram = multiply(adjoint_symbol(theta), theta);
  InnerCertificate cert;
  cert.worst_index = MultiIndex::zeros(theta.n());
  MultiIndex zero = MultiIndex::zeros(theta.n());
  Matrix id = Matrix::Identity(theta.dim_in(), theta.dim_in());
  cert.residual = max_abs(gram.coefficient(zero) - id);
  for (const auto& [k, c] : gram.terms()) {
    if (k == zero) continue;
    double r = max_abs(c);
    if (r > cert.residual) {
      cert.residual = r;
      cert.worst_index = k;
    }
  }
  cert.verdict = theta.is_analytic() && cert.residual <= tol;
  return cert;
}

PointwisePartialIsometry is_partial_isometry_ae(const LaurentSymbol& phi, int sample_count,
                                                double tol, std::uint64_t seed) {
  PointwisePartialIsometry out;
  LaurentSymbol triple = multiply(phi, multiply(adjoint_symbol(phi), phi));
  out.exact_residual = max_coefficient_distance(triple, phi);
  out.samples = sample_count;
  for (const Point& z : torus_samples(phi.n(), sample_count, seed)) {
    Matrix v = eval(phi, z);
    out.sampled_residual = std::max(out.sampled_residual, max_abs(v * v.adjoint() * v - v));
  }
  out.verdict = out.exact_residual <= tol && out.sampled_residual <= tol;
  return out;
}

std::vector<Point> torus_samples(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::vector<Point> pts(count, Point(n));
  for (auto& p : pts)
    for (auto& c : p) c = std::polar(1.0, ang(rng));
  return pts;
}

std::vector<Point> polydisc_samples(int n, int count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(count, Point(n));
  for (auto& p : pts)
    for (auto& c : p) {
      // uniform in the disc: sqrt for the radial density
      double r = radius * std::sqrt(u(rng));
      c = std::polar(r, 2.0 * std::numbers::pi * u(rng));
    }
  return pts;
}

LaurentSymbol random_inner(int n, int dim_out, int dim_in, int exponent_bound,
                           std::uint64_t seed) {
  if (dim_out < dim_in) throw Error("random_inner: need dim_out >= dim_in");
  if (exponent_bound < 0) throw Error("random_inner: negative exponent bound");
  std::mt19937_64 rng(seed);
  Matrix v = random_isometry(dim_out, dim_in, rng);
  Matrix w = random_isometry(dim_in, dim_in, rng);
  std::vector<std::pair<MultiIndex, Matrix>> t;
  for (int j = 0; j < dim_in; ++j) {
    MultiIndex a = random_exponent(n, exponent_bound, rng, VarSet::all(n));
    t.emplace_back(a, v.col(j) * w.row(j));
  }
  return LaurentSymbol(n, dim_out, dim_in, t);
}

std::pair<LaurentSymbol, LaurentSymbol> random_inner_pair(int n, int dim_out, int dim_in,
                                                          int exponent_bound,
                                                          std::uint64_t seed) {
  if (dim_out < dim_in) throw Error("random_inner_pair: need dim_out >= dim_in");
  std::mt19937_64 rng(seed);
  Matrix v1 = random_isometry(dim_out, dim_in, rng);
  Matrix v2 = random_isometry(dim_out, dim_in, rng);
  Matrix w = random_isometry(dim_in, dim_in, rng);
  std::uniform_int_distribution<int> side(0, 2);
  std::vector<std::pair<MultiIndex, Matrix>> tg, tp;
  for (int j = 0; j < dim_in; ++j) {
    // 0: variable feeds alpha_j, 1: beta_j, 2: neither
    VarSet va, vb;
    for (int i = 0; i < n; ++i) {
      int s = side(rng);
      if (s == 0) va = va.with(i);
      if (s == 1) vb = vb.with(i);
    }
    tg.emplace_back(random_exponent(n, exponent_bound, rng, va), v1.col(j) * w.row(j));
    tp.emplace_back(random_exponent(n, exponent_bound, rng, vb), v2.col(j) * w.row(j));
  }
  return {LaurentSymbol(n, dim_out, dim_in, tg), LaurentSymbol(n, dim_out, dim_in, tp)};
}

std::pair<LaurentSymbol, LaurentSymbol> random_product_pair(int n, int dim_out, int dim_in,
                                                            int degree, bool satisfy,
                                                            std::uint64_t seed) {
  if (n < 1 || dim_out < 1 || dim_in < 1 || degree < 1)
    throw Error("random_product_pair: infeasible parameters");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // Partition variables: Gamma-only, Psi-only, shared (shared needs y orthogonal to v).
    std::uniform_int_distribution<int> role(0, dim_in >= 2 ? 2 : 1);
    VarSet g_only, p_only, shared;
    for (int i = 0; i < n; ++i) {
      int r = role(rng);
      if (r == 0) g_only = g_only.with(i);
      if (r == 1) p_only = p_only.with(i);
      if (r == 2) shared = shared.with(i);
    }
    Matrix yv = random_isometry(dim_in, std::min(dim_in, 2), rng);
    Eigen::VectorXcd y = yv.col(0);
    Eigen::VectorXcd v = dim_in >= 2 ? Eigen::VectorXcd(yv.col(1)) : Eigen::VectorXcd(yv.col(0));

    auto build = [&](VarSet own, const Eigen::VectorXcd& row_vec) {
      std::vector<std::pair<MultiIndex, Matrix>> t;
      t.emplace_back(MultiIndex::zeros(n), gaussian(dim_out, dim_in, rng));
      std::uniform_int_distribution<int> count(1, 3);
      int terms = count(rng);
      for (int s = 0; s < terms; ++s) {
        MultiIndex k = random_exponent(n, degree, rng, own | shared);
        if (k.is_zero()) continue;
        VarSet used = support_vars(k);
        if ((used & shared).empty())
          t.emplace_back(k, gaussian(dim_out, dim_in, rng));
        else
          t.emplace_back(k, gaussian(dim_out, 1, rng) * row_vec.adjoint());
      }
      return LaurentSymbol(n, dim_out, dim_in, t);
    };
    LaurentSymbol g = build(g_only, y);
    LaurentSymbol p = build(p_only, v);
    if (satisfy) return {g, p};

    std::uniform_int_distribution<int> pick(0, n - 1);
    int i = pick(rng);
    MultiIndex e = MultiIndex::unit(n, i);
    g = g + LaurentSymbol::monomial(e, gaussian(dim_out, dim_in, rng));
    p = p + LaurentSymbol::monomial(e, gaussian(dim_out, dim_in, rng));
    if (shifted_product_max(g, p) >= 0.1) return {g, p};
  }
  throw Error("random_product_pair: could not reach violation magnitude 0.1");
}

LaurentSymbol random_symbol(int n, int dim_out, int dim_in, int degree, bool analytic,
                            int max_terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, std::max(1, max_terms));
  std::uniform_int_distribution<int> ex(analytic ? 0 : -degree, degree);
  std::vector<std::pair<MultiIndex, Matrix>> t;
  int terms = count(rng);
  for (int s = 0; s < terms; ++s) {
    MultiIndex k = MultiIndex::zeros(n);
    for (int i = 0; i < n; ++i) k[i] = ex(rng);
    t.emplace_back(k, gaussian(dim_out, dim_in, rng));
  }
  return LaurentSymbol(n, dim_out, dim_in, t);
}

}  // namespace polytoep
