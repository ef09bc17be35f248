#include "quasipd/validation.hpp"

#include "quasipd/kernels.hpp"

namespace quasipd {
namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::vector<double> centered(std::span<const double> v, double mean) {
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out) x -= mean;
    return out;
}

}  // namespace

double squared_correlation(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size() && !a.empty(), ErrorKind::Input, "squared_correlation: size mismatch");
    const std::vector<double> ca = centered(a, mean_of(a));
    const std::vector<double> cb = centered(b, mean_of(b));
    const double saa = kernels::dot(ca, ca);
    const double sbb = kernels::dot(cb, cb);
    require(saa > 0.0, ErrorKind::Numerical, "R-squared undefined: model series has zero variance");
    require(sbb > 0.0, ErrorKind::Numerical, "R-squared undefined: reference series has zero variance");
    const double sab = kernels::dot(ca, cb);
    return (sab * sab) / (saa * sbb);
}

ValidationReport validate(const AnnualPdSeries& pd, const ReferenceDfSeries& reference) {
    const MonthlySeries model = pd.to_series();
    const auto [m, r] = align(model, reference.DF);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] && r[i]) {
            xs.push_back(*m[i]);
            ys.push_back(*r[i]);
        }
    }
    require(xs.size() >= 3, ErrorKind::Input,
            "validation needs at least 3 overlapping months, found " + std::to_string(xs.size()));
    ValidationReport out;
    out.r_squared = squared_correlation(xs, ys);
    out.aligned_months = static_cast<int>(xs.size());
    out.mean_model = mean_of(xs);
    out.mean_reference = mean_of(ys);
    return out;
}

SegmentSeries build_retail_ex_mortgage(const SegmentSeries& total_loans, const SegmentSeries& mortgage) {
    require(total_loans.start() == mortgage.start() && total_loans.size() == mortgage.size(), ErrorKind::Input,
            "retail and mortgage series are not aligned: " + total_loans.E.start().to_string() + ".." + total_loans.E.last().to_string() +
                " vs " + mortgage.E.start().to_string() + ".." + mortgage.E.last().to_string());
    MonthlySeries e = subtract(total_loans.E, mortgage.E);
    MonthlySeries npl = subtract(total_loans.NPL, mortgage.NPL);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string month = e.start().plus(static_cast<long>(i)).to_string();
        require(!e[i] || *e[i] >= 0.0, ErrorKind::Input, "mortgage debt exceeds total debt at " + month);
        require(!npl[i] || *npl[i] >= 0.0, ErrorKind::Input, "mortgage overdue debt exceeds total overdue debt at " + month);
    }
    return SegmentSeries::make(total_loans.segment_id + "-ex-mortgage", std::move(e), std::move(npl));
}

}  // namespace quasipd
