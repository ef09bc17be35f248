#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "quasipd/pd_filter.hpp"

namespace quasipd::synth {

/// xorshift64* generator. Output sequence is fixed by the algorithm, so seeded
/// fixtures reproduce across platforms and languages:
///   s ^= s >> 12; s ^= s << 25; s ^= s >> 27; return s * 0x2545F4914F6CDD1D.
/// A zero seed is replaced by 0x9E3779B97F4A7C15.
class XorShift64Star {
public:
    explicit XorShift64Star(std::uint64_t seed) noexcept : state_(seed == 0 ? 0x9E3779B97F4A7C15ULL : seed) {}

    std::uint64_t next() noexcept {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform on [0,1) from the top 53 bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

struct ConstantE {
    double level = 1000.0;
};
struct GeometricE {
    double level = 1000.0;
    double monthly_growth = 0.0;  // E_i = level * (1 + growth)^i
};

struct ConstantP {
    double p = 0.003;
};
struct Hump {
    double center = 0.0;  // hazard index, 0-based
    double height = 0.0;  // added to logit(P) at the center
    double width = 1.0;   // Gaussian standard deviation in months
};
/// logit(P_i) = logit(base) + slope * i + sum_k height_k exp(-(i - center_k)^2 / (2 width_k^2))
struct HumpedP {
    double base = 0.003;
    double slope = 0.0;
    std::vector<Hump> humps;
};

struct ConstantR {
    double rr = 0.3;
};
/// R_i = rr + amplitude * (2u - 1), u from XorShift64Star(seed).
struct NoisyR {
    double rr = 0.3;
    double amplitude = 0.05;
    std::uint64_t seed = 1;
};

struct SynthSpec {
    std::string segment_id = "synthetic";
    MonthIndex start{2010, 1};
    int months = 130;
    std::variant<ConstantE, GeometricE> E = ConstantE{};
    std::variant<ConstantP, HumpedP> P = ConstantP{};
    std::variant<ConstantR, NoisyR> R = ConstantR{};
    /// Defaults to the steady state p_1 E_1 / (p_1 + rr).
    std::optional<double> npl_first;
};

struct SynthBundle {
    SegmentSeries segment;
    FilterSolution truth;
    AnnualPdSeries true_annual_pd;
};

/// Forward-simulates the balance equation from known hazards and recoveries.
/// Deterministic given `spec`, seed included. Raises Error(Infeasible) if NPL leaves [0, E].
SynthBundle generate(const SynthSpec& spec);

/// Fixture used by the acceptance suite and `simulate` defaults: 130 months,
/// flat exposure, logit-affine hazards with three Gaussian humps, R = rr.
SynthSpec default_spec();

}  // namespace quasipd::synth
