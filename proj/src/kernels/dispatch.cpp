#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"
#include "quasipd/error.hpp"

namespace quasipd::kernels {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(QUASIPD_HAVE_AVX2_KERNELS)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(QUASIPD_HAVE_NEON_KERNELS)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) noexcept {
    if (!isa_available(isa)) return detail::kScalarTable;
    switch (isa) {
#if defined(QUASIPD_HAVE_AVX2_KERNELS)
        case Isa::Avx2: return detail::kAvx2Table;
#endif
#if defined(QUASIPD_HAVE_NEON_KERNELS)
        case Isa::Neon: return detail::kNeonTable;
#endif
        default: return detail::kScalarTable;
    }
}

namespace {

const KernelTable& resolve() noexcept {
    if (const char* forced = std::getenv("QUASIPD_KERNELS"); forced != nullptr && std::string_view(forced) == "scalar") {
        return detail::kScalarTable;
    }
    if (isa_available(Isa::Avx2)) return table(Isa::Avx2);
    if (isa_available(Isa::Neon)) return table(Isa::Neon);
    return detail::kScalarTable;
}

}  // namespace

const KernelTable& active() noexcept {
    static const KernelTable& chosen = resolve();
    return chosen;
}

double second_diff_sq_sum(std::span<const double> x) { return active().second_diff_sq_sum(x.data(), x.size()); }

void second_diff_normal_apply(std::span<const double> x, std::span<double> g, double scale) {
    require(g.size() == x.size(), ErrorKind::Input, "second_diff_normal_apply: size mismatch");
    active().second_diff_normal_apply(x.data(), g.data(), x.size(), scale);
}

double sq_dev_sum(std::span<const double> v, double center) { return active().sq_dev_sum(v.data(), v.size(), center); }

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::Input, "dot: size mismatch");
    return active().dot(a.data(), b.data(), a.size());
}

void implied_r(std::span<const double> e, std::span<const double> npl, std::span<const double> p,
               std::span<double> r) {
    const std::size_t m = p.size();
    require(e.size() >= m && npl.size() == m + 1 && r.size() == m, ErrorKind::Input, "implied_r: size mismatch");
    active().implied_r(e.data(), npl.data(), p.data(), r.data(), m);
}

}  // namespace quasipd::kernels
