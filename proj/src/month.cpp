#include "quasipd/month.hpp"

#include <charconv>
#include <cstdio>

#include "quasipd/error.hpp"

namespace quasipd {

MonthIndex::MonthIndex(int year, int month) {
    require(month >= 1 && month <= 12, ErrorKind::Input, "month out of range 1..12: " + std::to_string(month));
    require(year >= 0 && year <= 9999, ErrorKind::Input, "year out of range: " + std::to_string(year));
    serial_ = year * 12 + (month - 1);
}

MonthIndex MonthIndex::parse(std::string_view text) {
    auto bad = [&] { fail(ErrorKind::Input, "expected YYYY-MM, got '" + std::string(text) + "'"); };
    if (text.size() != 7 || text[4] != '-') bad();
    int year = 0;
    int month = 0;
    const char* b = text.data();
    if (auto r = std::from_chars(b, b + 4, year); r.ec != std::errc{} || r.ptr != b + 4) bad();
    if (auto r = std::from_chars(b + 5, b + 7, month); r.ec != std::errc{} || r.ptr != b + 7) bad();
    if (month < 1 || month > 12) bad();
    return MonthIndex(year, month);
}

std::string MonthIndex::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
    return buf;
}

}  // namespace quasipd
