#include "quasipd/synth.hpp"

#include <cmath>

namespace quasipd::synth {
namespace {

double logit(double p) { return std::log(p) - std::log1p(-p); }

std::vector<double> exposure_path(const SynthSpec& spec) {
    std::vector<double> E(static_cast<std::size_t>(spec.months));
    if (const auto* c = std::get_if<ConstantE>(&spec.E)) {
        require(c->level > 0.0, ErrorKind::Input, "synthetic E level must be positive");
        std::fill(E.begin(), E.end(), c->level);
    } else {
        const auto& g = std::get<GeometricE>(spec.E);
        require(g.level > 0.0 && g.monthly_growth > -1.0, ErrorKind::Input, "synthetic geometric E needs level > 0 and growth > -1");
        for (std::size_t i = 0; i < E.size(); ++i) E[i] = g.level * std::pow(1.0 + g.monthly_growth, static_cast<double>(i));
    }
    return E;
}

std::vector<double> hazard_path(const SynthSpec& spec, std::size_t m) {
    std::vector<double> P(m);
    if (const auto* c = std::get_if<ConstantP>(&spec.P)) {
        require(c->p > 0.0 && c->p < 1.0, ErrorKind::Input, "synthetic constant hazard must lie in (0,1)");
        std::fill(P.begin(), P.end(), c->p);
        return P;
    }
    const auto& h = std::get<HumpedP>(spec.P);
    require(h.base > 0.0 && h.base < 1.0, ErrorKind::Input, "synthetic base hazard must lie in (0,1)");
    const double base = logit(h.base);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = static_cast<double>(i);
        double z = base + h.slope * t;
        for (const Hump& hump : h.humps) {
            require(hump.width > 0.0, ErrorKind::Input, "synthetic hump width must be positive");
            const double u = (t - hump.center) / hump.width;
            z += hump.height * std::exp(-0.5 * u * u);
        }
        P[i] = 1.0 / (1.0 + std::exp(-z));
        require(P[i] > 0.0 && P[i] < 1.0, ErrorKind::Input, "synthetic hazard saturates at month index " + std::to_string(i));
    }
    return P;
}

std::vector<double> recovery_path(const SynthSpec& spec, std::size_t m) {
    if (const auto* c = std::get_if<ConstantR>(&spec.R)) return std::vector<double>(m, c->rr);
    const auto& n = std::get<NoisyR>(spec.R);
    XorShift64Star rng(n.seed);
    std::vector<double> R(m);
    for (auto& r : R) r = n.rr + n.amplitude * (2.0 * rng.uniform() - 1.0);
    return R;
}

}  // namespace

SynthBundle generate(const SynthSpec& spec) {
    require(spec.months >= 2, ErrorKind::Input, "synthetic segment needs at least 2 months");
    const std::vector<double> E = exposure_path(spec);
    const std::size_t m = E.size() - 1;
    const std::vector<double> P = hazard_path(spec, m);
    const std::vector<double> R = recovery_path(spec, m);

    const double npl_first = spec.npl_first.value_or(P[0] * E[0] / (P[0] + R[0]));
    std::vector<double> npl;
    try {
        npl = forward_npl(E, npl_first, P, R, spec.start);
    } catch (const Error& e) {
        fail(ErrorKind::Infeasible, std::string(e.what()) + "; lower the hazards, raise the recovery share or start NPL lower");
    }

    SynthBundle out{
        SegmentSeries::make(spec.segment_id, MonthlySeries::dense(spec.start, E), MonthlySeries::dense(spec.start, npl)),
        FilterSolution{spec.start, P, R},
        AnnualPdSeries{},
    };
    if (P.size() >= 12) out.true_annual_pd = annualize(P, spec.start);
    return out;
}

SynthSpec default_spec() {
    SynthSpec spec;
    spec.segment_id = "synthetic";
    spec.start = MonthIndex(2009, 4);
    spec.months = 130;
    spec.E = ConstantE{1000.0};
    HumpedP humps;
    humps.base = 0.003;
    humps.slope = 0.002;
    humps.humps = {Hump{20.0, 0.9, 7.0}, Hump{65.0, 0.7, 8.0}, Hump{105.0, 0.6, 7.0}};
    spec.P = humps;
    spec.R = ConstantR{0.3442};
    return spec;
}

}  // namespace quasipd::synth
