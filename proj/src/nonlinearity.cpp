#include "nlslab/nonlinearity.hpp"

#include <algorithm>
#include <math.h>  // pchip.hpp calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nlslab {

std::string to_string(NonlinearityKind kind) {
    switch (kind) {
        case NonlinearityKind::Power: return "Power";
        case NonlinearityKind::PerturbedPower: return "PerturbedPower";
        case NonlinearityKind::RhoFamily: return "RhoFamily";
        case NonlinearityKind::Tabulated: return "Tabulated";
        case NonlinearityKind::ZeroMassExample: return "ZeroMassExample";
    }
    return "Unknown";
}

namespace {

/// s^p for s >= 0 with integer fast paths (p = 3 for N = 2, p = 2 for N = 4).
double pow_p(const ProblemParams& pp, double s) {
    switch (pp.N()) {
        case 2: return s * s * s;
        case 4: return s * s;
        default: return std::pow(s, pp.p());
    }
}

/// Smooth bump exp(1 - 1/(1-x^2)) on |x| < 1 with value 1 at 0.
double bump(double x) {
    const double q = 1.0 - x * x;
    return q > 0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}
double bump_prime(double x) {
    const double q = 1.0 - x * x;
    return q > 0 ? bump(x) * (-2.0 * x / (q * q)) : 0.0;
}

// Triweight kernel primitives on [-1, 1]: C = cumulative, M' = u k(u).
double tri_cdf(double u) {
    if (u <= -1) return 0.0;
    if (u >= 1) return 1.0;
    const double u2 = u * u;
    return (35.0 / 32.0) * (u - u2 * u + 0.6 * u2 * u2 * u - u2 * u2 * u2 * u / 7.0 + 16.0 / 35.0);
}
double tri_first_moment(double u) {
    if (u <= -1 || u >= 1) return 0.0;
    const double q = 1.0 - u * u;
    return -(35.0 / 256.0) * q * q * q * q;
}

/// (x)_+ convolved with the triweight kernel of radius eps.
double smooth_hinge(double x, double eps) {
    if (eps == 0.0) return std::max(x, 0.0);
    if (x <= -eps) return 0.0;
    if (x >= eps) return x;
    const double u = x / eps;
    return x * tri_cdf(u) - eps * tri_first_moment(u);
}
double smooth_step(double x, double eps) {
    if (eps == 0.0) return x > 0 ? 1.0 : 0.0;
    return tri_cdf(x / eps);
}

class ConstantProfile final : public AProfile {
  public:
    explicit ConstantProfile(double alpha) : alpha_(alpha) {}
    double value(double) const override { return alpha_; }
    double log_slope(double) const override { return 0.0; }
    std::optional<std::pair<double, double>> support() const override {
        if (alpha_ == 0.0) return std::nullopt;
        return std::make_pair(0.0, std::numeric_limits<double>::infinity());
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "constant a = " << alpha_;
        return os.str();
    }

  private:
    double alpha_;
};

class BumpProfile final : public AProfile {
  public:
    BumpProfile(double eps, int sign) : eps_(eps), sign_(sign) {}
    double value(double s) const override {
        const double x = s - 2.0;
        const double q = x * x - 1.0;
        return q < 0 ? sign_ * eps_ * std::exp(1.0 / q) : 0.0;
    }
    double log_slope(double s) const override {
        const double x = s - 2.0;
        const double q = x * x - 1.0;
        if (q >= 0) return 0.0;
        return sign_ * eps_ * std::exp(1.0 / q) * (-2.0 * x / (q * q)) * s;
    }
    std::optional<std::pair<double, double>> support() const override {
        if (eps_ == 0.0) return std::nullopt;
        return std::make_pair(1.0, 3.0);
    }
    std::string describe() const override {
        std::ostringstream os;
        os << (sign_ > 0 ? "+" : "-") << eps_ << " bump on (1,3)";
        return os.str();
    }

  private:
    double eps_;
    int sign_;
};

class TwoScaleProfile final : public AProfile {
  public:
    TwoScaleProfile(ProfilePtr a1, ProfilePtr a2, double shift)
        : a1_(std::move(a1)), a2_(std::move(a2)), shift_(shift), contraction_(std::exp(-shift)) {}
    double value(double s) const override {
        return a1_->value(s) + a2_->value(contraction_ * s);
    }
    double log_slope(double s) const override {
        return a1_->log_slope(s) + a2_->log_slope(contraction_ * s);
    }
    std::optional<std::pair<double, double>> support() const override {
        auto s1 = a1_->support();
        auto s2 = a2_->support();
        if (s2) s2 = std::make_pair(s2->first / contraction_, s2->second / contraction_);
        if (!s1) return s2;
        if (!s2) return s1;
        return std::make_pair(std::min(s1->first, s2->first), std::max(s1->second, s2->second));
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "two-scale [" << a1_->describe() << "] + [" << a2_->describe()
           << "](exp(-" << shift_ << ") s)";
        return os.str();
    }

  private:
    ProfilePtr a1_, a2_;
    double shift_, contraction_;
};

/// H = a(s) s^{p+1}/(p+1)
class ProfileModel final : public NonlinearityModel {
  public:
    ProfileModel(ProblemParams pp, ProfilePtr a) : pp_(pp), a_(std::move(a)) {}
    NonlinearityValues eval(double s) const override {
        const double sp = pow_p(pp_, s);
        const double p1 = pp_.p() + 1.0;
        const double a = a_->value(s);
        const double as = a_->log_slope(s);
        NonlinearityValues v;
        v.H = a * sp * s / p1;
        v.h = sp * (a + as / p1);
        return v;
    }

  private:
    ProblemParams pp_;
    ProfilePtr a_;
};

class ZeroModel final : public NonlinearityModel {
  public:
    NonlinearityValues eval(double) const override { return {}; }
};

/// rho(s) = alpha s^k/(1+s^k): H = rho s^2/2, h = rho s + rho' s^2/2.
class RhoModel final : public NonlinearityModel {
  public:
    RhoModel(double alpha, double k) : alpha_(alpha), k_(k) {}
    NonlinearityValues eval(double s) const override {
        NonlinearityValues v;
        if (s == 0.0) return v;
        // in s^{-k} beyond s = 1 so that neither branch overflows
        double rho, rho_s;  // rho'(s) s
        if (s <= 1.0) {
            const double sk = std::pow(s, k_);
            rho = alpha_ * sk / (1.0 + sk);
            rho_s = alpha_ * k_ * sk / ((1.0 + sk) * (1.0 + sk));
        } else {
            const double ik = std::pow(s, -k_);
            rho = alpha_ / (1.0 + ik);
            rho_s = alpha_ * k_ * ik / ((1.0 + ik) * (1.0 + ik));
        }
        v.H = 0.5 * rho * s * s;
        v.h = rho * s + 0.5 * rho_s * s;
        return v;
    }

  private:
    double alpha_, k_;
};

/// Cubic Hermite table of g on [0, s_n]; beyond, g_n (s/s_n)^k with the
/// log-slope k of the interpolant at s_n.
class TabulatedModel final : public NonlinearityModel {
  public:
    TabulatedModel(ProblemParams pp, std::vector<double> s, std::vector<double> g)
        : pp_(pp), s_(std::move(s)), g_(std::move(g)) {
        std::vector<double> x(s_), y(g_);
        boost::math::interpolators::pchip<std::vector<double>> spline(std::move(x), std::move(y));
        d_.resize(s_.size());
        for (std::size_t i = 0; i < s_.size(); ++i) d_[i] = spline.prime(s_[i]);
        cum_.assign(s_.size(), 0.0);
        for (std::size_t i = 0; i + 1 < s_.size(); ++i) cum_[i + 1] = cum_[i] + segment(i, 1.0).second;
        const double sn = s_.back();
        h_end_ = g_.back() - pow_p(pp_, sn);
        k_end_ = g_.back() > 0 ? std::max(0.0, sn * d_.back() / g_.back()) : 0.0;
    }
    double alpha() const { return h_end_ / s_.back(); }

    NonlinearityValues eval(double s) const override {
        const double p1 = pp_.p() + 1.0;
        const double sp = pow_p(pp_, s);
        NonlinearityValues v;
        double g, G;
        if (s >= s_.back()) {
            const double sn = s_.back();
            const double x = s / sn;
            g = g_.back() * std::pow(x, k_end_);
            G = cum_.back() + g_.back() * sn * (std::pow(x, k_end_ + 1.0) - 1.0) / (k_end_ + 1.0);
        } else {
            const auto it = std::upper_bound(s_.begin(), s_.end(), s);
            const std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
            const double theta = (s - s_[i]) / (s_[i + 1] - s_[i]);
            auto [gv, Gv] = segment(i, theta);
            g = gv;
            G = cum_[i] + Gv;
        }
        v.h = g - sp;
        v.H = G - sp * s / p1;
        return v;
    }

  private:
    /// (value, integral from s_i) of the Hermite cubic at s_i + theta h_i.
    std::pair<double, double> segment(std::size_t i, double t) const {
        const double hh = s_[i + 1] - s_[i];
        const double y0 = g_[i], y1 = g_[i + 1], m0 = hh * d_[i], m1 = hh * d_[i + 1];
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        const double val = y0 * (2 * t3 - 3 * t2 + 1) + m0 * (t3 - 2 * t2 + t) + y1 * (-2 * t3 + 3 * t2) +
                           m1 * (t3 - t2);
        const double integral = hh * (y0 * (0.5 * t4 - t3 + t) + m0 * (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2) +
                                      y1 * (-0.5 * t4 + t3) + m1 * (0.25 * t4 - t3 / 3.0));
        return {val, integral};
    }

    ProblemParams pp_;
    std::vector<double> s_, g_, d_, cum_;
    double h_end_ = 0.0, k_end_ = 1.0;
};

class SumModel final : public NonlinearityModel {
  public:
    SumModel(std::shared_ptr<const NonlinearityModel> base, PerturbationXi xi, double eps)
        : base_(std::move(base)), xi_(std::move(xi)), eps_(eps) {}
    NonlinearityValues eval(double s) const override {
        NonlinearityValues v = base_->eval(s);
        v.H += eps_ * xi_.value(s);
        v.h += eps_ * xi_.derivative(s);
        return v;
    }

  private:
    std::shared_ptr<const NonlinearityModel> base_;
    PerturbationXi xi_;
    double eps_;
};

// ---- zero-mass example ingredients -------------------------------------------------

constexpr double kChiCenter = 2.0, kChiHalf = 0.8;    // chi on (1.2, 2.8)
constexpr double kPsiCenter = 1.1, kPsiHalf = 0.095;  // psi on (1.005, 1.195)
constexpr double kPhiCenter = 2.3, kPhiHalf = 0.6;    // phi on (1.7, 2.9), rising at 2
constexpr double kChi2Half = 0.9;                     // N = 2: chi on (1.1, 2.9)

double chi(double s) { return bump((s - kChiCenter) / kChiHalf); }
double psi(double s) { return bump((s - kPsiCenter) / kPsiHalf); }
double phi(double s) { return bump((s - kPhiCenter) / kPhiHalf); }
double phi_prime(double s) { return bump_prime((s - kPhiCenter) / kPhiHalf) / kPhiHalf; }

/// F_0 = s^{p+1-2*}/(p+1), F_1 = F_0 + D with D' = F_0'(kappa psi - chi).
class HighDimExample {
  public:
    explicit HighDimExample(const ProblemParams& pp) : pp_(pp) {
        e_ = pp.p() + 1.0 - pp.two_star();
        using boost::math::quadrature::gauss_kronrod;
        auto f0p = [this](double s) { return F0_prime(s); };
        const double Ichi = gauss_kronrod<double, 61>::integrate(
            [&](double s) { return f0p(s) * chi(s); }, kChiCenter - kChiHalf, kChiCenter + kChiHalf, 15, 1e-14);
        const double Ipsi = gauss_kronrod<double, 61>::integrate(
            [&](double s) { return f0p(s) * psi(s); }, kPsiCenter - kPsiHalf, kPsiCenter + kPsiHalf, 15, 1e-14);
        kappa_ = Ichi / Ipsi;

        const std::size_t cells = 4000;
        step_ = (hi_ - lo_) / cells;
        D_.assign(cells + 1, 0.0);
        for (std::size_t i = 0; i < cells; ++i) {
            const double a = lo_ + i * step_;
            D_[i + 1] = D_[i] + boost::math::quadrature::gauss<double, 10>::integrate(
                                    [this](double s) { return D_prime(s); }, a, a + step_);
        }
    }

    double F0_prime(double s) const { return e_ * std::pow(s, e_ - 1.0) / (pp_.p() + 1.0); }
    double D_prime(double s) const { return F0_prime(s) * (kappa_ * psi(s) - chi(s)); }
    double F1_prime(double s) const { return F0_prime(s) * (1.0 - chi(s) + kappa_ * psi(s)); }

    /// D(s), zero outside the perturbed window.
    double D(double s) const {
        if (s <= kPsiCenter - kPsiHalf || s >= kChiCenter + kChiHalf) return 0.0;
        const double x = (s - lo_) / step_;
        const std::size_t i = std::min(static_cast<std::size_t>(x), D_.size() - 2);
        const double t = x - i;
        const double a = lo_ + i * step_;
        const double m0 = step_ * D_prime(a), m1 = step_ * D_prime(a + step_);
        const double t2 = t * t, t3 = t2 * t;
        return D_[i] * (2 * t3 - 3 * t2 + 1) + m0 * (t3 - 2 * t2 + t) + D_[i + 1] * (-2 * t3 + 3 * t2) +
               m1 * (t3 - t2);
    }

  private:
    ProblemParams pp_;
    double e_ = 0.0, kappa_ = 0.0;
    double lo_ = 1.0, hi_ = 3.0, step_ = 0.0;
    std::vector<double> D_;
};

class HighDimExampleModel final : public NonlinearityModel {
  public:
    HighDimExampleModel(const ProblemParams& pp, std::shared_ptr<const HighDimExample> ex)
        : pp_(pp), ex_(std::move(ex)), ts_(pp.two_star()) {}
    NonlinearityValues eval(double s) const override {
        NonlinearityValues v;
        if (s <= 1.0 || s >= 3.0) return v;
        const double w = std::pow(s, ts_);
        v.H = w * ex_->D(s);
        v.h = ts_ * w / s * ex_->D(s) + w * ex_->D_prime(s);
        return v;
    }

  private:
    ProblemParams pp_;
    std::shared_ptr<const HighDimExample> ex_;
    double ts_;
};

/// N = 2: H = -G_0 chi.
class PlaneExampleModel final : public NonlinearityModel {
  public:
    NonlinearityValues eval(double s) const override {
        NonlinearityValues v;
        const double x = (s - kChiCenter) / kChi2Half;
        if (std::abs(x) >= 1) return v;
        const double G0 = 0.25 * s * s * s * s, g0 = s * s * s;
        v.H = -G0 * bump(x);
        v.h = -(g0 * bump(x) + G0 * bump_prime(x) / kChi2Half);
        return v;
    }
};

std::shared_ptr<const HighDimExample> high_dim_example(const ProblemParams& pp) {
    return std::make_shared<const HighDimExample>(pp);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    auto neg = [&](double x) { return -f(x); };
    auto r = boost::math::tools::brent_find_minima(neg, lo, hi, 40);
    return -r.second;
}

}  // namespace

// ---- ProfileA ------------------------------------------------------------------------

std::shared_ptr<const ProfileA> make_profile_a(double alpha, double L, const ProblemParams& params,
                                               std::optional<double> mollify_eps) {
    if (!std::isfinite(alpha) || !std::isfinite(L))
        throw std::invalid_argument("make_profile_a: non-finite parameter");
    if (std::abs(alpha) > 0.5) throw std::invalid_argument("make_profile_a: |alpha| must be <= 1/2");
    if (!(L > 1.0)) throw std::invalid_argument("make_profile_a: L must exceed 1");
    const double eps_max = std::log((L + 1.0) / L);
    const double eps = mollify_eps.value_or(0.5 * eps_max);
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("make_profile_a: mollify_eps must be >= 0");
    if (eps > eps_max)
        throw std::invalid_argument("make_profile_a: mollify_eps exceeds log((L+1)/L) and would erode the plateau on [1/L, L]");

    auto a = std::shared_ptr<ProfileA>(new ProfileA());
    a->alpha_ = alpha;
    a->L_ = L;
    a->tau_ = 1.0 / (2.0 * params.N() * params.N());
    a->eps_ = eps;
    if (alpha != 0.0) {
        const double sg = alpha > 0 ? 1.0 : -1.0;
        const double lp = std::log(L + 1.0);
        const double ramp = std::abs(alpha) / a->tau_;
        const double c = sg * a->tau_;
        a->hinges_ = {{-lp - ramp, c}, {-lp, -c}, {lp, -c}, {lp + ramp, c}};
    }
    return a;
}

double ProfileA::value(double s) const {
    if (hinges_.empty() || !(s > 0)) return 0.0;
    const double t = std::log(s);
    if (t <= hinges_.front().first - eps_ || t >= hinges_.back().first + eps_) return 0.0;
    double a = 0.0;
    for (const auto& [tk, ck] : hinges_) a += ck * smooth_hinge(t - tk, eps_);
    return a;
}

double ProfileA::log_slope(double s) const {
    if (hinges_.empty() || !(s > 0)) return 0.0;
    const double t = std::log(s);
    if (t <= hinges_.front().first - eps_ || t >= hinges_.back().first + eps_) return 0.0;
    double d = 0.0;
    for (const auto& [tk, ck] : hinges_) d += ck * smooth_step(t - tk, eps_);
    return d;
}

std::optional<std::pair<double, double>> ProfileA::support() const {
    if (hinges_.empty()) return std::nullopt;
    return std::make_pair(std::exp(hinges_.front().first - eps_), std::exp(hinges_.back().first + eps_));
}

std::string ProfileA::describe() const {
    std::ostringstream os;
    os << "profile(alpha=" << alpha_ << ", L=" << L_ << ", tau=" << tau_ << ", mollify=" << eps_ << ")";
    return os.str();
}

ProfilePtr make_constant_profile(double alpha) { return std::make_shared<const ConstantProfile>(alpha); }

ProfilePtr make_bump_profile(double eps, int sign) {
    if (!(eps >= 0) || !std::isfinite(eps)) throw std::invalid_argument("bump: eps must be >= 0");
    if (eps >= std::exp(1.0)) throw std::invalid_argument("bump: eps must keep 1 + a > 0 (eps < e)");
    if (sign != 1 && sign != -1) throw std::invalid_argument("bump: sign must be +1 or -1");
    return std::make_shared<const BumpProfile>(eps, sign);
}

// ---- Nonlinearity ---------------------------------------------------------------------

Nonlinearity::Nonlinearity(NonlinearityKind kind, ProblemParams params, double alpha,
                           std::shared_ptr<const NonlinearityModel> model, ProfilePtr profile,
                           std::string description)
    : kind_(kind),
      params_(params),
      alpha_(alpha),
      model_(std::move(model)),
      profile_(std::move(profile)),
      description_(std::move(description)) {
    if (!model_) throw std::invalid_argument("Nonlinearity: null model");
}

NonlinearityValues Nonlinearity::eval(double s) const {
    if (s == 0.0) return {};
    const double a = std::abs(s);
    NonlinearityValues v = model_->eval(a);
    const double sp = pow_p(params_, a);
    v.g = sp + v.h;
    v.G = sp * a / (params_.p() + 1.0) + v.H;
    if (s < 0) {
        v.g = -v.g;
        v.h = -v.h;
    }
    return v;
}

double Nonlinearity::g(double s) const { return eval(s).g; }
double Nonlinearity::G(double s) const { return eval(s).G; }
double Nonlinearity::h(double s) const { return eval(s).h; }
double Nonlinearity::H(double s) const { return eval(s).H; }
double Nonlinearity::rho(double s) const {
    if (s == 0.0) return 0.0;
    return eval(s).H / (0.5 * s * s);
}

Nonlinearity make_power(const ProblemParams& params) {
    return Nonlinearity(NonlinearityKind::Power, params, 0.0, std::make_shared<const ZeroModel>(), nullptr,
                        "power |s|^{p-1}s");
}

Nonlinearity make_perturbed_power(const ProblemParams& params, ProfilePtr profile) {
    if (!profile) throw std::invalid_argument("make_perturbed_power: null profile");
    auto model = std::make_shared<const ProfileModel>(params, profile);
    return Nonlinearity(NonlinearityKind::PerturbedPower, params, 0.0, model, profile,
                        "perturbed power, " + profile->describe());
}

Nonlinearity make_plateau_power(const ProblemParams& params, double alpha) {
    if (!(alpha > -1.0)) throw std::invalid_argument("make_plateau_power: need 1 + alpha > 0");
    auto profile = make_constant_profile(alpha);
    auto model = std::make_shared<const ProfileModel>(params, profile);
    std::ostringstream os;
    os << "(1 + " << alpha << ") power";
    // h = alpha s^p grows faster than s, so no finite (g1*) limit; alpha() reports 0.
    return Nonlinearity(NonlinearityKind::PerturbedPower, params, 0.0, model, profile, os.str());
}

Nonlinearity make_bump(const ProblemParams& params, double eps, int sign) {
    auto profile = make_bump_profile(eps, sign);
    return make_perturbed_power(params, profile);
}

Nonlinearity make_rho_family(const ProblemParams& params, double alpha, double k) {
    if (!std::isfinite(alpha) || !(k > 0)) throw std::invalid_argument("make_rho_family: bad parameters");
    std::ostringstream os;
    os << "rho = " << alpha << " s^" << k << "/(1+s^" << k << ")";
    return Nonlinearity(NonlinearityKind::RhoFamily, params, alpha, std::make_shared<const RhoModel>(alpha, k),
                        nullptr, os.str());
}

Nonlinearity make_tabulated(const ProblemParams& params, std::vector<double> s, std::vector<double> g) {
    if (s.size() != g.size()) throw std::invalid_argument("tabulated: column length mismatch");
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!std::isfinite(s[i]) || !std::isfinite(g[i])) throw std::invalid_argument("tabulated: non-finite entry");
    if (!s.empty() && s.front() < 0) throw std::invalid_argument("tabulated: abscissae must be >= 0");
    if (s.empty() || s.front() > 0) {
        s.insert(s.begin(), 0.0);
        g.insert(g.begin(), 0.0);
    } else if (g.front() != 0.0) {
        throw std::invalid_argument("tabulated: g(0) must vanish (odd extension)");
    }
    if (s.size() < 4) throw std::invalid_argument("tabulated: need at least 4 points");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1])) throw std::invalid_argument("tabulated: abscissae must be strictly increasing");
    auto model = std::make_shared<const TabulatedModel>(params, std::move(s), std::move(g));
    const double alpha = model->alpha();
    return Nonlinearity(NonlinearityKind::Tabulated, params, alpha, model, nullptr, "tabulated g");
}

Nonlinearity load_tabulated(const ProblemParams& params, const std::string& csv_path) {
    std::ifstream f(csv_path);
    if (!f) throw std::invalid_argument("tabulated: cannot open " + csv_path);
    std::vector<double> s, g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument(csv_path + ":" + std::to_string(lineno) + ": expected \"s,g\"");
        try {
            s.push_back(std::stod(line.substr(0, comma)));
            g.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header
            throw std::invalid_argument(csv_path + ":" + std::to_string(lineno) + ": not a number");
        }
    }
    return make_tabulated(params, std::move(s), std::move(g));
}

double min_admissible_ell(const AProfile& a1, const AProfile& a2, const ProblemParams& params) {
    const auto s1 = a1.support();
    const auto s2 = a2.support();
    if (!s1 || !s2) return 0.0;
    return std::max(0.0, 4.0 / params.N() * std::log(s1->second / s2->first));
}

Nonlinearity make_two_scale(const std::shared_ptr<const ProfileA>& a1, const std::shared_ptr<const ProfileA>& a2,
                            double ell, const ProblemParams& params) {
    if (!a1 || !a2) throw std::invalid_argument("make_two_scale: null profile");
    if (!(ell >= 0) || !std::isfinite(ell)) throw std::invalid_argument("make_two_scale: ell must be >= 0");
    const double need = min_admissible_ell(*a1, *a2, params);
    if (ell <= need && a1->support() && a2->support()) {
        std::ostringstream os;
        os << "make_two_scale: supports overlap for ell = " << ell << "; need ell > " << need;
        throw SupportOverlap(os.str(), need);
    }
    if (!a1->support() && !a2->support()) return make_power(params);
    auto profile = std::make_shared<const TwoScaleProfile>(a1, a2, params.N() * ell / 4.0);
    return make_perturbed_power(params, profile);
}

// ---- perturbations --------------------------------------------------------------------

PerturbationXi make_xi(std::function<double(double)> value, std::function<double(double)> derivative,
                       std::string name) {
    PerturbationXi xi{std::move(value), std::move(derivative), std::move(name), 0.0};
    return xi;
}

PerturbationXi scaled(const PerturbationXi& xi, double c) {
    auto v = xi.value;
    auto d = xi.derivative;
    PerturbationXi out{[v, c](double s) { return c * v(s); }, [d, c](double s) { return c * d(s); },
                       xi.name, std::abs(c) * xi.normX};
    return out;
}

double xi_norm(const PerturbationXi& xi, const ProblemParams& params) {
    const double p = params.p();
    auto near = [&](double t) {
        const double s = std::exp(t);
        return std::abs(xi.derivative(s)) / std::pow(s, p);
    };
    auto far = [&](double t) {
        const double s = std::exp(t);
        return std::abs(xi.derivative(s)) / s;
    };
    auto sup = [&](const std::function<double(double)>& f, double t0, double t1) {
        const std::size_t n = 20000;
        const double dt = (t1 - t0) / (n - 1);
        double best = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = f(t0 + i * dt);
            if (!std::isfinite(v)) throw std::invalid_argument("xi_norm: non-finite evaluator value");
            if (v > best) best = v, arg = i;
        }
        if (best == 0.0) return 0.0;
        const double lo = t0 + (arg == 0 ? 0.0 : (arg - 1.0) * dt);
        const double hi = t0 + std::min<double>(n - 1, arg + 1.0) * dt;
        return std::max(best, golden_max(f, lo, hi));
    };
    const double ln = std::log(10.0);
    return sup(near, -12.0 * ln, 0.0) + sup(far, 0.0, 12.0 * ln);
}

Nonlinearity perturb(const Nonlinearity& base, const PerturbationXi& xi, double eps) {
    if (!std::isfinite(eps)) throw std::invalid_argument("perturb: non-finite eps");
    if (eps == 0.0) return base;
    auto model = std::make_shared<const SumModel>(base.model(), xi, eps);
    std::ostringstream os;
    os << base.description() << " + " << eps << " " << xi.name;
    return Nonlinearity(base.kind(), base.params(), base.alpha(), model, base.profile_ptr(), os.str());
}

PerturbationXi g2_example_perturbation(const ProblemParams& params) {
    PerturbationXi xi;
    if (params.N() >= 3) {
        const double ts = params.two_star();
        xi = make_xi([ts](double s) { return std::pow(s, ts) * phi(s); },
                     [ts](double s) {
                         if (s <= kPhiCenter - kPhiHalf || s >= kPhiCenter + kPhiHalf) return 0.0;
                         return ts * std::pow(s, ts - 1.0) * phi(s) + std::pow(s, ts) * phi_prime(s);
                     },
                     "|s|^{2*} phi");
    } else {
        // Xi = -S((s - 1.1)/1.8) with the quintic smoothstep S, so Xi' = phi <= 0, phi(2) < 0
        auto S = [](double x) {
            if (x <= 0) return 0.0;
            if (x >= 1) return 1.0;
            return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
        };
        auto dS = [](double x) {
            if (x <= 0 || x >= 1) return 0.0;
            return 30.0 * x * x * (1.0 - x) * (1.0 - x);
        };
        xi = make_xi([S](double s) { return -S((s - 1.1) / 1.8); },
                     [dS](double s) { return -dS((s - 1.1) / 1.8) / 1.8; }, "-smoothstep on (1.1,2.9)");
    }
    xi.normX = xi_norm(xi, params);
    return xi;
}

Nonlinearity make_g2_example(const ProblemParams& params, double eps) {
    if (!(eps >= 0) || !std::isfinite(eps)) throw std::invalid_argument("make_g2_example: eps must be >= 0");
    std::shared_ptr<const NonlinearityModel> model;
    std::string desc;
    if (params.N() >= 3) {
        model = std::make_shared<const HighDimExampleModel>(params, high_dim_example(params));
        desc = "zero-mass example G_1 = s^{2*} F_1";
    } else {
        model = std::make_shared<const PlaneExampleModel>();
        desc = "zero-mass example G_1 = G_0 (1 - chi)";
    }
    Nonlinearity base(NonlinearityKind::ZeroMassExample, params, 0.0, model, nullptr, desc);
    return perturb(base, g2_example_perturbation(params), eps);
}

double g2_example_F1_prime(const ProblemParams& params, double s) {
    if (params.N() < 3) throw std::invalid_argument("g2_example_F1_prime: N >= 3 only");
    static thread_local std::optional<std::pair<int, std::shared_ptr<const HighDimExample>>> cache;
    if (!cache || cache->first != params.N()) cache.emplace(params.N(), high_dim_example(params));
    return cache->second->F1_prime(s);
}

double g2_example_phi_prime_at_2() { return phi_prime(2.0); }

// ---- condition checks -----------------------------------------------------------------

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (!(lo > 0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_space: bad range");
    std::vector<double> out(count);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

namespace {

/// Minimum of a margin over the sample, refined by Brent's method between the
/// neighbours of the worst sample.
ConditionVerdict min_margin(const std::vector<double>& s, const std::function<double(double)>& margin,
                            double tol) {
    ConditionVerdict v;
    v.worst_margin = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double m = margin(s[i]);
        if (m < v.worst_margin) v.worst_margin = m, arg = i;
    }
    v.witness = s[arg];
    const std::size_t lo = arg == 0 ? 0 : arg - 1;
    const std::size_t hi = std::min(arg + 1, s.size() - 1);
    if (hi > lo) {
        auto f = [&](double t) { return margin(std::exp(t)); };
        auto r = boost::math::tools::brent_find_minima(f, std::log(s[lo]), std::log(s[hi]), 40);
        if (r.second < v.worst_margin) {
            v.worst_margin = r.second;
            v.witness = std::exp(r.first);
        }
    }
    v.holds = v.worst_margin >= -tol;
    return v;
}

}  // namespace

ConditionReport check_conditions(const Nonlinearity& nl, double s_lo, double s_hi, std::size_t samples) {
    const auto s = log_space(s_lo, s_hi, samples);
    const ProblemParams& pp = nl.params();
    const double p = pp.p();
    const int N = pp.N();
    ConditionReport rep;

    rep.ambrosetti_rabinowitz = min_margin(
        s,
        [&](double x) {
            const auto v = nl.eval(x);
            const double scale = std::pow(x, p + 1.0);
            if (!(v.G > 0)) return std::min(v.G / scale, -std::numeric_limits<double>::min());
            return (v.g * x - 0.5 * (p + 3.0) * v.G) / scale;
        },
        1e-12);

    rep.g3 = min_margin(
        s,
        [&](double x) {
            const auto v = nl.eval(x);
            return (v.G - (N - 2.0) / (2.0 * N) * v.g * x) / std::pow(x, p + 1.0);
        },
        1e-12);

    {
        const double alpha = nl.alpha();
        ConditionVerdict v = min_margin(s, [&](double x) { return alpha - nl.rho(x); }, 0.0);
        // strict below saturation; at large s the gap can fall under double resolution
        bool ok = true;
        for (double x : s) {
            const double gap = alpha - nl.rho(x);
            if (gap < -1e-15 * (1.0 + std::abs(alpha)) || (x <= 1.0 && !(gap > 0))) {
                ok = false;
                break;
            }
        }
        v.holds = ok;
        rep.rho_below_alpha = v;
    }

    {
        ConditionVerdict v;
        v.worst_margin = std::numeric_limits<double>::infinity();
        double prev = nl.rho(s.front());
        for (std::size_t i = 1; i < s.size(); ++i) {
            const double cur = nl.rho(s[i]);
            const double m = prev - cur;
            if (m < v.worst_margin) v.worst_margin = m, v.witness = s[i];
            prev = cur;
        }
        v.holds = v.worst_margin >= -1e-14;
        rep.rho_nonincreasing = v;
    }

    auto limit_check = [&](double a, double b, const std::function<double(double)>& dev, bool trend_toward_a) {
        ConditionVerdict v;
        const auto t = log_space(a, b, 200);
        double worst = 0.0;
        for (double x : t) {
            const double d = std::abs(dev(x));
            if (d > worst) worst = d, v.witness = x;
        }
        const double near_end = std::abs(dev(trend_toward_a ? a : b));
        const double far_end = std::abs(dev(trend_toward_a ? b : a));
        v.worst_margin = 1e-3 - worst;
        v.holds = worst <= 1e-3 && near_end <= far_end + 1e-14;
        return v;
    };
    rep.limit_at_zero = limit_check(s_lo, 100.0 * s_lo, [&](double x) { return nl.h(x) / std::pow(x, p); }, true);
    rep.limit_at_infinity =
        limit_check(s_hi / 100.0, s_hi, [&](double x) { return nl.h(x) / x - nl.alpha(); }, false);
    return rep;
}

}  // namespace nlslab
