#pragma once

#include "qstack/scalar.hpp"

#include <string>
#include <vector>

namespace qstack {

enum class Verdict { Pass, Fail, Undecided };

struct ReportItem {
    std::string what;
    Verdict verdict = Verdict::Pass;
    std::string residual;  // reduced normal form, empty when passing
};

// Deterministic check report: items keep insertion order (checks emit them in
// canonical order), rendering is byte-stable for identical inputs.
class Report {
public:
    Report(std::string check, std::string dataset)
        : check_(std::move(check)), dataset_(std::move(dataset)) {}

    void add(ReportItem item) { items_.push_back(std::move(item)); }
    const std::vector<ReportItem>& items() const { return items_; }

    bool all_passed() const;
    size_t failures() const;

    std::string render_text() const;
    std::string render_machine() const;  // JSON, round-trips through the parser

    static Report parse_machine(const std::string& json_text);

private:
    std::string check_, dataset_;
    std::vector<ReportItem> items_;
};

} // namespace qstack
