#pragma once

// Human-readable structured-text serialization for rate plans, selections,
// and metrics reports. Format: "ffwd-report v1" header, "kind <name>",
// "key value" lines, and table blocks opened by a bare section name and
// closed by "end". Reals print with %.17g so round-trips are exact.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gapfill.hpp"
#include "metrics.hpp"
#include "profile.hpp"
#include "types.hpp"

namespace ffwd {

namespace detail {

inline std::string fmt_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream iss(line);
    std::vector<std::string> tokens;
    std::string t;
    while (iss >> t) tokens.push_back(t);
    return tokens;
}

}  // namespace detail

inline std::string encode_rate_plan(const RatePlan& plan) {
    std::ostringstream out;
    out << "ffwd-report v1\n"
        << "kind rate_plan\n"
        << "required_speedup " << detail::fmt_real(plan.required_speedup) << "\n"
        << "rate_min " << detail::fmt_real(plan.rate_min) << "\n"
        << "rate_max " << detail::fmt_real(plan.rate_max) << "\n"
        << "feasible " << (plan.feasible ? 1 : 0) << "\n"
        << "segments " << plan.segments.size() << "\n";
    for (const auto& s : plan.segments)
        out << s.start << " " << s.end << " " << s.importance_level << " "
            << detail::fmt_real(s.speedup) << "\n";
    out << "end\n";
    return out.str();
}

inline RatePlan decode_rate_plan(std::istream& in) {
    RatePlan plan;
    std::string line;
    std::size_t count = 0;
    bool in_table = false;
    while (std::getline(in, line)) {
        auto tok = detail::tokenize(line);
        if (tok.empty()) continue;
        if (in_table) {
            if (tok[0] == "end") break;
            if (tok.size() != 4) throw io_error("rate_plan: bad segment row");
            Segment s;
            s.start = static_cast<std::uint32_t>(std::stoul(tok[0]));
            s.end = static_cast<std::uint32_t>(std::stoul(tok[1]));
            s.importance_level = std::stoi(tok[2]);
            s.speedup = std::stod(tok[3]);
            plan.segments.push_back(s);
            if (plan.segments.size() == count) {
                in_table = false;
            }
            continue;
        }
        if (tok[0] == "required_speedup") plan.required_speedup = std::stod(tok[1]);
        else if (tok[0] == "rate_min") plan.rate_min = std::stod(tok[1]);
        else if (tok[0] == "rate_max") plan.rate_max = std::stod(tok[1]);
        else if (tok[0] == "feasible") plan.feasible = tok[1] != "0";
        else if (tok[0] == "segments") {
            count = std::stoul(tok[1]);
            in_table = count > 0;
        }
    }
    return plan;
}

inline std::string encode_selection(const Selection& sel) {
    std::ostringstream out;
    out << "ffwd-report v1\n"
        << "kind selection\n"
        << "required_speedup " << detail::fmt_real(sel.required_speedup) << "\n"
        << "entries " << sel.entries.size() << "\n";
    for (const auto& e : sel.entries)
        out << e.frame << " " << e.segment_id << " " << to_string(e.provenance)
            << "\n";
    out << "end\n";
    return out.str();
}

inline Selection decode_selection(std::istream& in) {
    Selection sel;
    std::string line;
    std::size_t count = 0;
    bool in_table = false;
    while (std::getline(in, line)) {
        auto tok = detail::tokenize(line);
        if (tok.empty()) continue;
        if (in_table) {
            if (tok[0] == "end") break;
            if (tok.size() != 3) throw io_error("selection: bad entry row");
            SelectionEntry e;
            e.frame = static_cast<std::uint32_t>(std::stoul(tok[0]));
            e.segment_id = std::stoi(tok[1]);
            if (tok[2] == "sampled") e.provenance = Provenance::sampled;
            else if (tok[2] == "smoothed") e.provenance = Provenance::smoothed;
            else if (tok[2] == "gapfill") e.provenance = Provenance::gapfill;
            else throw io_error("selection: unknown provenance " + tok[2]);
            sel.entries.push_back(e);
            if (sel.entries.size() == count) in_table = false;
            continue;
        }
        if (tok[0] == "required_speedup") sel.required_speedup = std::stod(tok[1]);
        else if (tok[0] == "entries") {
            count = std::stoul(tok[1]);
            in_table = count > 0;
        }
    }
    return sel;
}

inline std::string encode_metrics(const MetricsReport& report,
                                  const std::vector<double>& effective_rates = {}) {
    std::ostringstream out;
    out << "ffwd-report v1\n"
        << "kind metrics\n"
        << "selected_count " << report.selected_count << "\n"
        << "achieved_speedup " << detail::fmt_real(report.achieved_speedup) << "\n"
        << "speedup_deviation " << detail::fmt_real(report.speedup_deviation)
        << "\n"
        << "semantic_retained " << detail::fmt_real(report.semantic_retained)
        << "\n"
        << "discontinuity " << detail::fmt_real(report.discontinuity) << "\n";
    out << "instability "
        << (report.instability ? detail::fmt_real(*report.instability)
                               : std::string("NotAvailable"))
        << "\n";
    out << "transition_smoothness "
        << (report.transition_smoothness
                ? detail::fmt_real(*report.transition_smoothness)
                : std::string("NotAvailable"))
        << "\n";
    if (!effective_rates.empty()) {
        out << "effective_rates " << effective_rates.size() << "\n";
        for (double r : effective_rates) out << detail::fmt_real(r) << "\n";
    }
    out << "end\n";
    return out.str();
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("IoFailure: cannot open " + path + " for writing");
    out << content;
    if (!out) throw io_error("IoFailure: short write to " + path);
}

template <typename Decoder>
auto read_text(const std::string& path, Decoder&& decode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("IoFailure: cannot open " + path);
    return decode(in);
}

}  // namespace ffwd
