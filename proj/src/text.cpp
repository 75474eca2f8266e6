#include "shapebench/text.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace shapebench::text {

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_number: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

std::string format_fixed(double v, int digits) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::fixed, digits);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_fixed: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) noexcept {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

namespace {

template <typename T>
T parse_whole(std::string_view raw, const char* what) {
    const auto s = trim(raw);
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument(std::string("expected ") + what + ", got '" +
                                    std::string(raw) + "'");
    }
    return value;
}

}  // namespace

double parse_double(std::string_view s) { return parse_whole<double>(s, "a number"); }
long long parse_int(std::string_view s) { return parse_whole<long long>(s, "an integer"); }
unsigned long long parse_u64(std::string_view s) {
    return parse_whole<unsigned long long>(s, "an unsigned integer");
}

}  // namespace shapebench::text
