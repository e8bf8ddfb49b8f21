#include "occ/law.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "occ/errors.hpp"

namespace occ {

namespace {

constexpr std::uint64_t kHeadCap = 1ull << 20;       // materialized head in exact-tail mode
constexpr std::uint64_t kTableCap = 10'000'000;      // largest fully materialized table
constexpr std::uint64_t kRankCeiling = 1ull << 62;   // exact inversion up to this rank
constexpr std::uint64_t kMicroBuckets = 1ull << 61;  // synthetic states past the ceiling

inline double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t bounded_pick(std::uint64_t word, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(word) * bound) >> 64);
}

// Walker/Vose alias table over (unnormalized) weights, deterministic layout.
void build_alias(const std::vector<double>& p, std::vector<double>& accept,
                 std::vector<std::uint32_t>& other) {
  const std::size_t K = p.size();
  accept.assign(K, 1.0);
  other.resize(K);
  double total = std::accumulate(p.begin(), p.end(), 0.0);
  std::vector<double> w(K);
  for (std::size_t i = 0; i < K; ++i) {
    w[i] = p[i] * static_cast<double>(K) / total;
    other[i] = static_cast<std::uint32_t>(i);
  }
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < K; ++i)
    (w[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  while (!small.empty() && !large.empty()) {
    std::uint32_t s = small.back();
    small.pop_back();
    std::uint32_t l = large.back();
    accept[s] = w[s];
    other[s] = l;
    w[l] = (w[l] + w[s]) - 1.0;
    if (w[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
}

// sum_{j>r} j^(-s), Euler-Maclaurin at the boundary; relative error
// below 1e-7 for r >= 64 and s <= ~8, far smaller for larger r.
double zipf_raw_tail(double s, double r) {
  double f = std::pow(r, -s);
  double inv = 1.0 / r;
  double integral = f * r / (s - 1.0);
  double fp = -s * f * inv;
  double f3 = -s * (s + 1.0) * (s + 2.0) * f * inv * inv * inv;
  double t = integral - 0.5 * f - fp / 12.0 + f3 / 720.0;
  return t > 0.0 ? t : 0.0;
}

// LogCorrected raw masses: tail T(r) = 1/log(r+2); the per-rank weight is the
// telescoped difference, written via log1p to survive r near 2^62.
double logc_raw_tail(double r) { return 1.0 / std::log(r + 2.0); }

double logc_raw_weight(double rank) {
  double la = std::log(rank + 1.0);
  double lb = std::log(rank + 2.0);
  return std::log1p(1.0 / (rank + 1.0)) / (la * lb);
}

// Composite Simpson for sum_{j>r} g(j)^power of a smoothly decaying g,
// via x = r * e^w; the -g(r)/2 boundary term is the Euler-Maclaurin
// correction, the next-order terms are negligible at the call sites.
template <typename G>
double tail_power_quadrature(G&& g, double r, int power) {
  const double span = 120.0 / std::max(1, power - 1);
  const int intervals = 4096; // even
  const double h = span / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    double w = h * static_cast<double>(i);
    double x = r * std::exp(w);
    double val = std::pow(g(x), power) * x;
    double coef = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += coef * val;
  }
  double integral = sum * h / 3.0;
  return integral - 0.5 * std::pow(g(r), power);
}

} // namespace

struct RegularLaw::Model {
  LawFamily outer = LawFamily::PureDiffuse;
  LawFamily atom_fam = LawFamily::PureDiffuse;
  double gamma = 0.0;
  double q = 0.0;
  std::uint64_t m = 0;
  double atom_mass = 0.0;
  double eps = RegularLaw::kDefaultEpsilon;

  std::uint64_t head_count = 0;
  bool exact_mode = false;
  double m_raw = 1.0;
  double head_mass_cond = 1.0;
  double tail_mass_cond = 0.0;
  double tail_raw_at_head = 0.0;
  double trunc_bound = 0.0;
  double micro_raw = 0.0;
  double zipf_s = 0.0;

  std::vector<double> head_p; // conditional (pi*) probabilities; empty for FiniteUniform
  std::vector<double> alias_accept;
  std::vector<std::uint32_t> alias_other;

  bool has_atoms() const { return atom_fam != LawFamily::PureDiffuse; }

  double raw_weight(double rank) const {
    switch (atom_fam) {
      case LawFamily::ZipfLike: return std::pow(rank, -zipf_s);
      case LawFamily::LogCorrected: return logc_raw_weight(rank);
      default: return 0.0;
    }
  }

  double raw_tail(double rank) const {
    switch (atom_fam) {
      case LawFamily::ZipfLike: return zipf_raw_tail(zipf_s, rank);
      case LawFamily::LogCorrected: return logc_raw_tail(rank);
      default: return 0.0;
    }
  }

  double raw_tail_power(double rank, int power) const {
    if (power == 1) return raw_tail(rank);
    switch (atom_fam) {
      case LawFamily::ZipfLike: return zipf_raw_tail(zipf_s * power, rank);
      case LawFamily::LogCorrected:
        return tail_power_quadrature([](double x) { return logc_raw_weight(x); },
                                     rank, power);
      default: return 0.0;
    }
  }

  // Initial guess for the rank with raw tail mass <= t; refined by bisection.
  std::uint64_t tail_rank_guess(double t) const {
    double g;
    if (atom_fam == LawFamily::ZipfLike) {
      g = std::pow((zipf_s - 1.0) * t, 1.0 / (1.0 - zipf_s));
    } else {
      g = std::exp(1.0 / t) - 2.0;
    }
    if (!(g > static_cast<double>(head_count)))
      return head_count + 1;
    if (g >= static_cast<double>(kRankCeiling)) return kRankCeiling - 1;
    return static_cast<std::uint64_t>(g);
  }

  // Smallest rank past the head whose raw tail mass is below t, as a 0-based
  // atom index; targets below the rank ceiling's tail fall into the synthetic
  // micro-state band.
  std::uint64_t tail_index_for(double t) const {
    if (t <= micro_raw) {
      double frac = micro_raw > 0.0 ? t / micro_raw : 0.0;
      std::uint64_t bucket = static_cast<std::uint64_t>(
          frac * static_cast<double>(kMicroBuckets));
      if (bucket >= kMicroBuckets) bucket = kMicroBuckets - 1;
      return kRankCeiling + bucket;
    }
    std::uint64_t lo = head_count;   // raw_tail(lo) >= t
    std::uint64_t hi = kRankCeiling; // raw_tail(hi) < t
    std::uint64_t guess = tail_rank_guess(t);
    if (guess > lo && guess < hi) {
      if (raw_tail(static_cast<double>(guess)) >= t)
        lo = guess;
      else
        hi = guess;
    }
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (raw_tail(static_cast<double>(mid)) >= t)
        lo = mid;
      else
        hi = mid;
    }
    return hi - 1;
  }

  double cond_atom_prob(std::uint64_t index) const {
    if (atom_fam == LawFamily::FiniteUniform)
      return index < m ? 1.0 / static_cast<double>(m) : 0.0;
    if (index < head_p.size()) return head_p[index];
    if (!exact_mode) return 0.0;
    if (index >= kRankCeiling) {
      if (index >= kRankCeiling + kMicroBuckets) return 0.0;
      return micro_raw / m_raw / static_cast<double>(kMicroBuckets);
    }
    return raw_weight(static_cast<double>(index) + 1.0) / m_raw;
  }

  Symbol draw(std::mt19937_64& rng, FreshIdAllocator& fresh) const {
    double u = uniform53(rng);
    double diffuse = 1.0 - atom_mass;
    if (u < diffuse) return Symbol::fresh(fresh.next());
    if (atom_fam == LawFamily::FiniteUniform)
      return Symbol::atom(bounded_pick(rng(), m));
    if (exact_mode) {
      double v = (u - diffuse) / atom_mass; // conditional coordinate
      if (v < tail_mass_cond) {
        double t = (tail_mass_cond - v) * m_raw;
        return Symbol::atom(tail_index_for(t));
      }
    }
    std::uint64_t idx = bounded_pick(rng(), alias_accept.size());
    double u2 = uniform53(rng);
    if (u2 >= alias_accept[idx]) idx = alias_other[idx];
    return Symbol::atom(idx);
  }
};

namespace {

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps <= 1e-6))
    throw std::invalid_argument("law: epsilon must lie in (0, 1e-6]");
}

} // namespace

namespace {
template <typename ModelT>
void finish_head_tables(ModelT& m) {
  if (!m.head_p.empty()) build_alias(m.head_p, m.alias_accept, m.alias_other);
}
} // namespace

RegularLaw RegularLaw::finite_uniform(std::uint64_t atoms) {
  if (atoms < 1 || atoms > 1'000'000'000ull)
    throw std::invalid_argument("FiniteUniform: atom count must lie in [1, 1e9]");
  auto model = std::make_shared<Model>();
  model->outer = model->atom_fam = LawFamily::FiniteUniform;
  model->m = atoms;
  model->atom_mass = 1.0;
  model->head_count = atoms;
  model->eps = 0.0;
  return RegularLaw(std::move(model));
}

RegularLaw RegularLaw::geometric(double q, double epsilon) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("Geometric: q must lie in (0,1)");
  check_epsilon(epsilon);
  // tail mass after J atoms is q^J; smallest J with q^J <= eps
  double jreal = std::ceil(std::log(epsilon) / std::log(q));
  std::uint64_t J = jreal < 1.0 ? 1 : static_cast<std::uint64_t>(jreal);
  if (J > kTableCap) {
    std::ostringstream msg;
    msg << "Geometric(q=" << q << "): epsilon=" << epsilon << " needs J=" << J
        << " materialized atoms, beyond the " << kTableCap
        << " cap; raise epsilon or lower q";
    throw ConfigError(msg.str());
  }
  auto model = std::make_shared<Model>();
  model->outer = model->atom_fam = LawFamily::Geometric;
  model->q = q;
  model->eps = epsilon;
  model->atom_mass = 1.0;
  model->head_count = J;
  model->trunc_bound = std::pow(q, static_cast<double>(J));
  double norm = 1.0 - model->trunc_bound;
  model->head_p.resize(J);
  double w = (1.0 - q) / norm;
  for (std::uint64_t i = 0; i < J; ++i) {
    model->head_p[i] = w;
    w *= q;
  }
  finish_head_tables(*model);
  return RegularLaw(std::move(model));
}

RegularLaw RegularLaw::zipf_like(double gamma, double epsilon) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("ZipfLike: gamma must lie in (0,1)");
  check_epsilon(epsilon);
  const double s = 1.0 / gamma;
  auto model = std::make_shared<Model>();
  model->outer = model->atom_fam = LawFamily::ZipfLike;
  model->gamma = gamma;
  model->zipf_s = s;
  model->eps = epsilon;
  model->atom_mass = 1.0;

  // Estimate the epsilon-truncation rank from the leading tail term
  // T(J) ~ J^(1-s)/(s-1) and a coarse estimate of the normalizer.
  long double probe = 0.0;
  for (std::uint64_t r = 1; r <= 4096; ++r)
    probe += std::pow(static_cast<double>(r), -s);
  double m_est = static_cast<double>(probe) + zipf_raw_tail(s, 4096.0);
  double target = epsilon * m_est;
  double jreal = std::pow((s - 1.0) * target, 1.0 / (1.0 - s));

  if (jreal <= static_cast<double>(kHeadCap)) {
    // Fully materialized, truncated and renormalized.
    std::uint64_t J = std::max<std::uint64_t>(64, static_cast<std::uint64_t>(std::ceil(jreal)));
    long double head = 0.0;
    std::vector<double> raw(J);
    for (std::uint64_t r = 1; r <= J; ++r) {
      raw[r - 1] = std::pow(static_cast<double>(r), -s);
      head += raw[r - 1];
    }
    // drop underflowed entries so every stored probability is positive
    while (!raw.empty() && raw.back() == 0.0) raw.pop_back();
    J = raw.size();
    double tail = zipf_raw_tail(s, static_cast<double>(J));
    model->head_count = J;
    model->m_raw = static_cast<double>(head);
    model->trunc_bound = tail / (static_cast<double>(head) + tail);
    model->head_p.resize(J);
    for (std::uint64_t i = 0; i < J; ++i)
      model->head_p[i] = raw[i] / static_cast<double>(head);
  } else {
    // Materialized head plus exact analytic tail.
    const std::uint64_t J = kHeadCap;
    long double head = 0.0;
    model->head_p.resize(J);
    for (std::uint64_t r = 1; r <= J; ++r) {
      model->head_p[r - 1] = std::pow(static_cast<double>(r), -s);
      head += model->head_p[r - 1];
    }
    double tail = zipf_raw_tail(s, static_cast<double>(J));
    model->exact_mode = true;
    model->head_count = J;
    model->m_raw = static_cast<double>(head) + tail;
    model->tail_raw_at_head = tail;
    model->tail_mass_cond = tail / model->m_raw;
    model->head_mass_cond = 1.0 - model->tail_mass_cond;
    model->micro_raw = zipf_raw_tail(s, static_cast<double>(kRankCeiling));
    for (auto& p : model->head_p) p /= model->m_raw;
  }
  finish_head_tables(*model);
  return RegularLaw(std::move(model));
}

RegularLaw RegularLaw::log_corrected(double epsilon) {
  check_epsilon(epsilon);
  auto model = std::make_shared<Model>();
  model->outer = model->atom_fam = LawFamily::LogCorrected;
  model->eps = epsilon;
  model->atom_mass = 1.0;
  model->gamma = 1.0;

  const std::uint64_t J = kHeadCap;
  model->exact_mode = true;
  model->head_count = J;
  model->m_raw = logc_raw_tail(0.0); // total raw mass = T(0)
  model->tail_raw_at_head = logc_raw_tail(static_cast<double>(J));
  model->tail_mass_cond = model->tail_raw_at_head / model->m_raw;
  model->head_mass_cond = 1.0 - model->tail_mass_cond;
  model->micro_raw = logc_raw_tail(static_cast<double>(kRankCeiling));
  model->head_p.resize(J);
  for (std::uint64_t r = 1; r <= J; ++r)
    model->head_p[r - 1] = logc_raw_weight(static_cast<double>(r)) / model->m_raw;
  finish_head_tables(*model);
  return RegularLaw(std::move(model));
}

RegularLaw RegularLaw::pure_diffuse() {
  auto model = std::make_shared<Model>();
  model->outer = LawFamily::PureDiffuse;
  model->atom_fam = LawFamily::PureDiffuse;
  model->atom_mass = 0.0;
  return RegularLaw(std::move(model));
}

RegularLaw RegularLaw::mixed(double atom_mass, const RegularLaw& inner) {
  if (!(atom_mass > 0.0 && atom_mass < 1.0))
    throw std::invalid_argument("Mixed: atom_mass must lie in (0,1)");
  if (inner.model_->outer == LawFamily::Mixed ||
      inner.model_->outer == LawFamily::PureDiffuse)
    throw std::invalid_argument("Mixed: inner law must be a purely atomic family");
  auto model = std::make_shared<Model>(*inner.model_);
  model->outer = LawFamily::Mixed;
  model->atom_mass = atom_mass;
  return RegularLaw(std::move(model));
}

const char* family_name(LawFamily family) {
  switch (family) {
    case LawFamily::FiniteUniform: return "FiniteUniform";
    case LawFamily::Geometric: return "Geometric";
    case LawFamily::ZipfLike: return "ZipfLike";
    case LawFamily::LogCorrected: return "LogCorrected";
    case LawFamily::PureDiffuse: return "PureDiffuse";
    case LawFamily::Mixed: return "Mixed";
  }
  return "?";
}

LawFamily RegularLaw::family() const { return model_->outer; }
LawFamily RegularLaw::atom_family() const { return model_->atom_fam; }
double RegularLaw::atom_mass() const { return model_->atom_mass; }
double RegularLaw::epsilon() const { return model_->eps; }
std::uint64_t RegularLaw::materialized_atoms() const { return model_->head_count; }
bool RegularLaw::exact_tail() const { return model_->exact_mode; }
double RegularLaw::tail_bound() const { return model_->trunc_bound; }
double RegularLaw::deep_tail_mass() const {
  return model_->atom_mass * model_->micro_raw / model_->m_raw;
}

double RegularLaw::claimed_gamma() const {
  switch (model_->atom_fam) {
    case LawFamily::ZipfLike: return model_->gamma;
    case LawFamily::LogCorrected: return 1.0;
    case LawFamily::Geometric:
    case LawFamily::FiniteUniform: return 0.0;
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

Regime RegularLaw::regime() const {
  if (!model_->has_atoms()) return Regime(0.0, 0.0, AtomCardinality::Empty);
  AtomCardinality card = model_->atom_fam == LawFamily::FiniteUniform
                             ? AtomCardinality::Finite
                             : AtomCardinality::Infinite;
  double g = card == AtomCardinality::Finite ? 0.0 : claimed_gamma();
  return Regime(g, model_->atom_mass, card);
}

double RegularLaw::conditional_atom_prob(std::uint64_t index) const {
  return model_->cond_atom_prob(index);
}

double RegularLaw::atom_prob(std::uint64_t index) const {
  return model_->atom_mass * model_->cond_atom_prob(index);
}

double RegularLaw::atom_tail_power_sum(std::uint64_t index, int power) const {
  if (power < 1) throw std::invalid_argument("atom_tail_power_sum: power >= 1");
  const Model& m = *model_;
  if (!m.has_atoms()) return 0.0;
  double cond;
  if (m.atom_fam == LawFamily::FiniteUniform) {
    std::uint64_t left = index + 1 < m.m ? m.m - index - 1 : 0;
    cond = static_cast<double>(left) * std::pow(1.0 / static_cast<double>(m.m), power);
  } else if (index + 1 >= m.head_count && m.exact_mode) {
    cond = m.raw_tail_power(static_cast<double>(index + 1), power) /
           std::pow(m.m_raw, power);
  } else {
    // inside the materialized table
    long double acc = 0.0;
    for (std::uint64_t j = index + 1; j < m.head_p.size(); ++j)
      acc += std::pow(m.head_p[j], power);
    cond = static_cast<double>(acc);
    if (m.exact_mode)
      cond += m.raw_tail_power(static_cast<double>(m.head_count), power) /
              std::pow(m.m_raw, power);
  }
  return std::pow(m.atom_mass, power) * cond;
}

Symbol RegularLaw::draw(std::mt19937_64& rng, FreshIdAllocator& fresh) const {
  return model_->draw(rng, fresh);
}

double RegularLaw::param_gamma() const { return model_->gamma; }
double RegularLaw::param_q() const { return model_->q; }
std::uint64_t RegularLaw::param_atoms() const { return model_->m; }

RegularLaw RegularLaw::inner() const {
  if (model_->outer != LawFamily::Mixed)
    throw std::invalid_argument("inner(): law is not Mixed");
  auto model = std::make_shared<Model>(*model_);
  model->outer = model->atom_fam;
  model->atom_mass = 1.0;
  return RegularLaw(std::move(model));
}

std::string RegularLaw::describe() const {
  std::ostringstream out;
  const Model& m = *model_;
  switch (m.outer) {
    case LawFamily::FiniteUniform: out << "FiniteUniform(" << m.m << ")"; break;
    case LawFamily::Geometric: out << "Geometric(q=" << m.q << ")"; break;
    case LawFamily::ZipfLike: out << "ZipfLike(gamma=" << m.gamma << ")"; break;
    case LawFamily::LogCorrected: out << "LogCorrected"; break;
    case LawFamily::PureDiffuse: out << "PureDiffuse"; break;
    case LawFamily::Mixed:
      out << "Mixed(atomMass=" << m.atom_mass << ", "
          << family_name(m.atom_fam) << ")";
      break;
  }
  return out.str();
}

double empirical_index_slope(const RegularLaw& law) {
  if (law.atom_mass() == 0.0)
    throw std::invalid_argument("index oracle: law has no atoms");
  if (law.atom_family() == LawFamily::FiniteUniform) return 0.0;

  const std::uint64_t J = law.materialized_atoms();
  // nu(x) = #{indices i : p*(i) >= 1/x}; probabilities are non-increasing.
  auto nu = [&](double x) -> double {
    double thresh = 1.0 / x;
    std::uint64_t lo = 0, hi = law.exact_tail() ? kRankCeiling : J;
    if (law.conditional_atom_prob(0) < thresh) return 0.0;
    // invariant: p*(lo) >= thresh > p*(hi)
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (law.conditional_atom_prob(mid) >= thresh)
        lo = mid;
      else
        hi = mid;
    }
    return static_cast<double>(hi);
  };

  std::uint64_t anchor = std::min<std::uint64_t>(7, J - 1);
  double x_lo = 1.2 / law.conditional_atom_prob(anchor);
  double x_hi = law.exact_tail() ? 1e12 : 0.9 / law.conditional_atom_prob(J - 1);
  if (!(x_hi > x_lo * 4.0))
    throw std::invalid_argument("index oracle: support too small to fit");

  const int points = 48;
  double a11 = 0, a12 = 0, a13 = 0, a22 = 0, a23 = 0, a33 = 0;
  double b1 = 0, b2 = 0, b3 = 0;
  double step = std::log(x_hi / x_lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    double x = x_lo * std::exp(step * i);
    double lx = std::log(x);
    double llx = std::log(lx);
    double y = std::log(std::max(nu(x), 1.0));
    a11 += lx * lx; a12 += lx * llx; a13 += lx;
    a22 += llx * llx; a23 += llx; a33 += 1.0;
    b1 += lx * y; b2 += llx * y; b3 += y;
  }
  // solve the 3x3 normal equations by Gaussian elimination
  double A[3][4] = {{a11, a12, a13, b1}, {a12, a22, a23, b2}, {a13, a23, a33, b3}};
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r2 = c + 1; r2 < 3; ++r2)
      if (std::abs(A[r2][c]) > std::abs(A[piv][c])) piv = r2;
    std::swap(A[c], A[piv]);
    for (int r2 = 0; r2 < 3; ++r2) {
      if (r2 == c) continue;
      double f = A[r2][c] / A[c][c];
      for (int cc = c; cc < 4; ++cc) A[r2][cc] -= f * A[c][cc];
    }
  }
  return A[0][3] / A[0][0];
}

} // namespace occ
