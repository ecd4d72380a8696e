#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpwalk/errors.hpp"

namespace fpwalk {

using ordered_json = nlohmann::ordered_json;

struct CheckResult {
    std::string name;
    bool ok = false;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void render_text(const ordered_json& node, const std::string& indent, std::ostream& out) {
    for (auto it = node.begin(); it != node.end(); ++it) {
        const auto& v = it.value();
        if (v.is_object()) {
            out << indent << it.key() << ":\n";
            render_text(v, indent + "  ", out);
        } else if (v.is_array()) {
            out << indent << it.key() << " = [";
            bool first = true;
            for (const auto& e : v) {
                out << (first ? "" : ", ")
                    << (e.is_number_float() ? fmt_double(e.get<double>()) : e.dump());
                first = false;
            }
            out << "]\n";
        } else if (v.is_number_float()) {
            out << indent << it.key() << " = " << fmt_double(v.get<double>()) << '\n';
        } else if (v.is_string()) {
            out << indent << it.key() << " = " << v.get<std::string>() << '\n';
        } else {
            out << indent << it.key() << " = " << v.dump() << '\n';
        }
    }
}

inline void flatten_csv(const ordered_json& node, const std::string& prefix, std::ostream& out) {
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it)
            flatten_csv(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (node.is_array()) {
        int i = 0;
        for (const auto& e : node) {
            flatten_csv(e, prefix + "[" + std::to_string(i) + "]", out);
            ++i;
        }
    } else {
        out << prefix << ',' << node.dump() << '\n';
    }
}

}  // namespace detail

// A report is subcommand content plus a flat list of named checks.  All
// timing lives under the single "timing" key so that the rest of the output
// is reproducible bit for bit.
struct Report {
    ordered_json body = ordered_json::object();
    std::vector<CheckResult> checks;
    std::map<std::string, double> timing_ms;

    bool all_ok() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }

    void add_check(const std::string& name, double value, double target, double tolerance) {
        const bool ok = std::abs(value - target) <= tolerance;
        checks.push_back({name, ok, value, target, tolerance});
    }

    void add_bound_check(const std::string& name, double value, double bound, double slack) {
        checks.push_back({name, value <= bound + slack, value, bound, slack});
    }

    void add_flag_check(const std::string& name, bool ok) {
        checks.push_back({name, ok, ok ? 1.0 : 0.0, 1.0, 0.0});
    }

    ordered_json to_json() const {
        ordered_json root = body;
        ordered_json arr = ordered_json::array();
        for (const auto& c : checks)
            arr.push_back({{"name", c.name},
                           {"ok", c.ok},
                           {"value", c.value},
                           {"target", c.target},
                           {"tolerance", c.tolerance}});
        root["checks"] = arr;
        root["all_checks_passed"] = all_ok();
        ordered_json timing = ordered_json::object();
        for (const auto& [k, v] : timing_ms) timing[k] = v;
        root["timing"] = timing;
        return root;
    }

    std::string to_text() const {
        std::ostringstream out;
        detail::render_text(body, "", out);
        if (!checks.empty()) {
            out << "checks:\n";
            for (const auto& c : checks)
                out << "  [" << (c.ok ? "PASS" : "FAIL") << "] " << c.name
                    << "  value=" << detail::fmt_double(c.value)
                    << " target=" << detail::fmt_double(c.target)
                    << " tol=" << detail::fmt_double(c.tolerance) << '\n';
            out << "all_checks_passed = " << (all_ok() ? "true" : "false") << '\n';
        }
        for (const auto& [k, v] : timing_ms)
            out << "timing." << k << " = " << detail::fmt_double(v) << '\n';
        return out.str();
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "key,value\n";
        detail::flatten_csv(body, "", out);
        for (const auto& c : checks)
            out << "check." << c.name << ',' << (c.ok ? "PASS" : "FAIL") << '\n';
        out << "all_checks_passed," << (all_ok() ? "true" : "false") << '\n';
        return out.str();
    }

    void write(std::ostream& out, const std::string& format) const {
        if (format == "json")
            out << to_json().dump(2) << '\n';
        else if (format == "csv")
            out << to_csv();
        else if (format == "text")
            out << to_text();
        else
            throw ValidationError("unknown output format '" + format + "'");
    }
};

}  // namespace fpwalk
