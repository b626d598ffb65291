#include "qstack/report.hpp"

#include "json.hpp"

namespace qstack {

bool Report::all_passed() const {
    for (const auto& i : items_)
        if (i.verdict != Verdict::Pass) return false;
    return true;
}

size_t Report::failures() const {
    size_t n = 0;
    for (const auto& i : items_)
        if (i.verdict != Verdict::Pass) ++n;
    return n;
}

namespace {
const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        default: return "UNDECIDED";
    }
}
Verdict verdict_from(const std::string& s) {
    if (s == "PASS") return Verdict::Pass;
    if (s == "FAIL") return Verdict::Fail;
    return Verdict::Undecided;
}
} // namespace

std::string Report::render_text() const {
    std::string out = "check " + check_ + " on " + dataset_ + "\n";
    for (const auto& i : items_) {
        out += "  [" + std::string(verdict_str(i.verdict)) + "] " + i.what;
        if (!i.residual.empty()) out += "  residual: " + i.residual;
        out += "\n";
    }
    if (items_.empty()) {
        out += "ALL CHECKS PASSED (0 items)\n";
    } else if (all_passed()) {
        out += "ALL CHECKS PASSED (" + std::to_string(items_.size()) + " items)\n";
    } else {
        out += std::to_string(failures()) + " of " + std::to_string(items_.size()) +
               " items failed\n";
    }
    return out;
}

std::string Report::render_machine() const {
    nlohmann::ordered_json j;
    j["check"] = check_;
    j["dataset"] = dataset_;
    j["items"] = nlohmann::ordered_json::array();
    for (const auto& i : items_) {
        nlohmann::ordered_json it;
        it["what"] = i.what;
        it["verdict"] = verdict_str(i.verdict);
        it["residual"] = i.residual;
        j["items"].push_back(it);
    }
    return j.dump(2) + "\n";
}

Report Report::parse_machine(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Report r(j.at("check").get<std::string>(), j.at("dataset").get<std::string>());
    for (const auto& it : j.at("items")) {
        ReportItem item;
        item.what = it.at("what").get<std::string>();
        item.verdict = verdict_from(it.at("verdict").get<std::string>());
        item.residual = it.at("residual").get<std::string>();
        r.add(std::move(item));
    }
    return r;
}

} // namespace qstack
