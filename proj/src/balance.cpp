#include "quasipd/balance.hpp"

#include <cmath>

#include "quasipd/error.hpp"
#include "quasipd/kernels.hpp"

namespace quasipd {

std::vector<double> forward_npl(std::span<const double> E, double npl_first, std::span<const double> P,
                                std::span<const double> R, MonthIndex start) {
    const std::size_t n = E.size();
    require(n >= 1, ErrorKind::Input, "forward_npl: empty E");
    require(P.size() + 1 == n && R.size() + 1 == n, ErrorKind::Input,
            "forward_npl: need N-1 hazards and recoveries for N months of E");
    require(npl_first >= 0.0 && npl_first <= E[0], ErrorKind::Infeasible,
            "forward_npl: initial NPL outside [0, E] at " + start.to_string());

    std::vector<double> npl(n);
    npl[0] = npl_first;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        npl[i + 1] = npl[i] * (1.0 - R[i]) + P[i] * (E[i] - npl[i]);
        const double v = npl[i + 1];
        if (!std::isfinite(v) || v < 0.0 || v > E[i + 1]) {
            fail(ErrorKind::Infeasible, "forward_npl: infeasible path, NPL = " + std::to_string(v) + " outside [0, E] at " +
                                            start.plus(static_cast<long>(i + 1)).to_string());
        }
    }
    return npl;
}

std::vector<double> implied_R(std::span<const double> E, std::span<const double> NPL, std::span<const double> P,
                              MonthIndex start) {
    const std::size_t n = E.size();
    require(NPL.size() == n && P.size() + 1 == n, ErrorKind::Input,
            "implied_R: need aligned E and NPL of length N and N-1 hazards");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (NPL[i] == 0.0) {
            fail(ErrorKind::Numerical, "implied_R: zero overdue debt at " + start.plus(static_cast<long>(i)).to_string() +
                                           ", recovery share undefined");
        }
    }
    std::vector<double> R(P.size());
    kernels::implied_r(E, NPL, P, R);
    return R;
}

}  // namespace quasipd
