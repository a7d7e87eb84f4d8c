#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace rackopt::io {

/// One line of the results table. Missing values print as empty fields;
/// times and the two gap columns are fixed to two decimals, UB/LB/FLB print
/// as integers when integral.
struct ResultRow {
    std::string instance;
    int pickers = 0;
    std::string cp;  // capacity column: one value, or ';'-joined when mixed
    std::string method;
    std::optional<double> t_s;
    std::optional<double> b_s;
    std::optional<double> ub;
    std::optional<double> gap;
    std::optional<double> lb;
    std::optional<double> fgap;
    std::optional<double> flb;
    std::optional<std::int64_t> ns;
    std::string status;
};

inline const char* results_csv_header() {
    return "instance,P,Cp,method,T_s,B_s,UB,GAP,LB,FGAP,FLB,NS,status";
}

namespace detail {

inline std::string fixed2(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", *v);
    return buf;
}

inline std::string number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return "";
    const double r = std::round(*v);
    if (std::abs(*v - r) < 1e-6) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.0f", r);
        return buf;
    }
    return fixed2(v);
}

}  // namespace detail

inline std::string results_row_string(const ResultRow& r) {
    std::string s;
    s += r.instance + ",";
    s += std::to_string(r.pickers) + ",";
    s += r.cp + ",";
    s += r.method + ",";
    s += detail::fixed2(r.t_s) + ",";
    s += detail::fixed2(r.b_s) + ",";
    s += detail::number(r.ub) + ",";
    s += detail::fixed2(r.gap) + ",";
    s += detail::number(r.lb) + ",";
    s += detail::fixed2(r.fgap) + ",";
    s += detail::number(r.flb) + ",";
    s += r.ns ? std::to_string(*r.ns) : "";
    s += ",";
    s += r.status;
    return s;
}

inline std::string results_csv_string(const std::vector<ResultRow>& rows) {
    std::string s = results_csv_header();
    s += "\n";
    for (const auto& r : rows) {
        s += results_row_string(r);
        s += "\n";
    }
    return s;
}

inline void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << results_csv_string(rows);
}

}  // namespace rackopt::io
