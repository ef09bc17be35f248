#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace quasipd {

/// Calendar month. Ordering and month arithmetic are exact.
class MonthIndex {
public:
    constexpr MonthIndex() = default;
    MonthIndex(int year, int month);

    /// Parses ISO "YYYY-MM". Throws Error(Input) on anything else.
    static MonthIndex parse(std::string_view text);

    [[nodiscard]] constexpr int year() const noexcept { return serial_ / 12; }
    [[nodiscard]] constexpr int month() const noexcept { return serial_ % 12 + 1; }

    [[nodiscard]] constexpr MonthIndex plus(std::int64_t months) const noexcept {
        MonthIndex m;
        m.serial_ = serial_ + static_cast<int>(months);
        return m;
    }
    [[nodiscard]] constexpr MonthIndex next() const noexcept { return plus(1); }

    /// Signed number of months from `other` to *this.
    [[nodiscard]] constexpr std::int64_t months_since(MonthIndex other) const noexcept {
        return static_cast<std::int64_t>(serial_) - other.serial_;
    }

    [[nodiscard]] std::string to_string() const;

    constexpr auto operator<=>(const MonthIndex&) const = default;

private:
    int serial_ = 0;  // year * 12 + (month - 1)
};

}  // namespace quasipd
