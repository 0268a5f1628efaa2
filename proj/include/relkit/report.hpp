#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>

#include "relkit/document.hpp"

namespace relkit {

/// One entry of a report's assertion ledger: a named check with its numeric
/// residual next to the boolean conclusion.
struct assertion_entry {
    std::string name;
    json expected;
    json observed;
    double tolerance = 0.0;
    double residual = 0.0;
    bool pass = false;
};

inline json assertion_to_json(const assertion_entry& a) {
    return json{{"name", a.name},     {"expected", a.expected}, {"observed", a.observed},
                {"tolerance", a.tolerance}, {"residual", a.residual}, {"pass", a.pass}};
}

/// Machine-readable command report. Deterministic for fixed inputs except
/// for the timestamp field.
class report {
public:
    explicit report(std::string command) : command_(std::move(command)) {}

    void set_inputs(json inputs) { inputs_ = std::move(inputs); }
    json& results() { return results_; }
    const json& results() const { return results_; }

    void add_assertion(assertion_entry a) {
        all_pass_ = all_pass_ && a.pass;
        assertions_.push_back(std::move(a));
    }

    void check(const std::string& name, double residual, double tolerance,
               json expected = true, json observed = json()) {
        assertion_entry a;
        a.name = name;
        a.expected = std::move(expected);
        a.residual = residual;
        a.tolerance = tolerance;
        a.pass = residual <= tolerance;
        a.observed = observed.is_null() ? json(a.pass) : observed;
        add_assertion(std::move(a));
    }

    bool all_pass() const { return all_pass_; }

    json to_json(bool with_timestamp = true) const {
        json assertions = json::array();
        for (const auto& a : assertions_) assertions.push_back(assertion_to_json(a));
        json out{{"command", command_},
                 {"inputs", inputs_},
                 {"results", results_},
                 {"assertions", assertions},
                 {"versions", json{{"relkit", "0.1.0"}, {"format", 1}}}};
        if (with_timestamp) {
            const auto now = std::chrono::system_clock::now().time_since_epoch();
            out["timestamp"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
        }
        return out;
    }

private:
    std::string command_;
    json inputs_ = json::object();
    json results_ = json::object();
    std::vector<assertion_entry> assertions_;
    bool all_pass_ = true;
};

/// FNV-1a digest of a canonical JSON dump, hex encoded; identifies inputs in
/// reports without embedding full payloads twice.
inline std::string input_digest(const json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace relkit
