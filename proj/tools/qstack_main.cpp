#include "CLI11.hpp"
#include "qstack/dataset.hpp"

#include <fstream>
#include <iostream>

using namespace qstack;

namespace {

struct Options {
    std::string format = "text";
    size_t max_degree = 6;
    size_t max_rounds = 4;
};

int emit(const Report& report, const Options& opt) {
    if (opt.format == "machine")
        std::cout << report.render_machine();
    else
        std::cout << report.render_text();
    return report.all_passed() ? 0 : 1;
}

std::string elem_str(const Element& e, const SymbolTable& tab) { return e.str(tab); }

Report check_cocycle(const Dataset& ds) {
    Report report("cocycle", ds.path);
    for (const auto& [name, st] : ds.stacks)
        for (const auto& item : st->check_cocycle_all()) {
            ReportItem ri;
            ri.what = name + ": " + item.what;
            if (!item.residual.is_zero()) {
                ri.verdict = Verdict::Fail;
                ri.residual = elem_str(item.residual, *ds.symbols);
            }
            report.add(std::move(ri));
        }
    return report;
}

Report check_tetra(const Dataset& ds) {
    Report report("tetra", ds.path);
    for (const auto& [name, st] : ds.stacks)
        for (const auto& item : st->check_tetrahedron_all()) {
            ReportItem ri;
            ri.what = name + ": " + item.what;
            if (!item.residual.is_zero()) {
                ri.verdict = Verdict::Fail;
                ri.residual = elem_str(item.residual, *ds.symbols);
            }
            report.add(std::move(ri));
        }
    return report;
}

Report check_rep(const Dataset& ds, const Options& opt) {
    Report report("rep", ds.path);
    for (const auto& [name, g] : ds.representations) {
        for (const auto& item : rep_check(g, opt.max_degree, opt.max_rounds)) {
            ReportItem ri;
            ri.what = name + ": rule " + item.what;
            if (item.status != Membership::Member) {
                ri.verdict = item.residual.is_zero() ? Verdict::Undecided : Verdict::Fail;
                ri.residual = elem_str(item.residual, *ds.symbols);
                if (item.status == Membership::Undecided) ri.verdict = Verdict::Undecided;
            }
            report.add(std::move(ri));
        }
        for (const auto& item : rep_check_inverses(g)) {
            ReportItem ri;
            ri.what = name + ": inverse pair " + item.what;
            if (!item.residual.is_zero()) {
                ri.verdict = Verdict::Fail;
                ri.residual = elem_str(item.residual, *ds.symbols);
            }
            report.add(std::move(ri));
        }
    }
    return report;
}

Report check_mc(const Dataset& ds) {
    Report report("mc", ds.path);
    for (const auto& [name, tc] : ds.twisted) {
        auto items = mc_check(*tc);
        if (items.empty()) {
            ReportItem ri;
            ri.what = name + ": Maurer-Cartan residuals all vanish";
            report.add(std::move(ri));
            continue;
        }
        for (const auto& item : items) {
            ReportItem ri;
            std::string tup;
            for (int c : item.tuple) tup += tc->stack->chart_name(c) + " ";
            ri.what = name + ": cell (" + tup + ") " + item.src_label + " -> " +
                      item.dst_label;
            ri.verdict = Verdict::Fail;
            for (const auto& t : item.residual)
                ri.residual += term_str(t, *tc, item.tuple.back(), item.tuple.front()) + " ; ";
            report.add(std::move(ri));
        }
    }
    return report;
}

Report check_gluing(const Dataset& ds) {
    Report report("gluing", ds.path);
    for (const auto& [name, g] : ds.gluings) {
        ExtendedEval ev(*g.sys, g.stack, g.b, 4);
        auto issues = gluing_check(ev, g.alpha, 3);
        if (issues.empty()) {
            ReportItem ri;
            ri.what = name + ": all gluing equations hold";
            report.add(std::move(ri));
        }
        for (const auto& issue : issues) {
            ReportItem ri;
            ri.what = name + ": " + issue.what;
            ri.verdict = Verdict::Fail;
            for (const auto& t : issue.residual.terms)
                ri.residual += elem_str(t.coeff, *ds.symbols) + " * " +
                               std::to_string(t.gen.pair) + "." +
                               std::to_string(t.gen.index) + " ; ";
            report.add(std::move(ri));
        }
    }
    return report;
}

Report check_ainfty(const Dataset& ds, size_t max_k) {
    Report report("ainfty", ds.path);
    for (const auto& [name, g] : ds.gluings) {
        auto violations = ainfty_check(*g.sys, max_k);
        ReportItem ri;
        ri.what = name + ": Stasheff identities up to length " + std::to_string(max_k);
        if (!violations.empty()) {
            ri.verdict = Verdict::Fail;
            ri.residual = std::to_string(violations.size()) + " violating tuples";
        }
        report.add(std::move(ri));
    }
    return report;
}

Report check_confluence(const Dataset& ds, size_t max_len) {
    Report report("confluence", ds.path);
    for (const auto& [name, p] : ds.presentations) {
        auto issues = check_local_confluence(*p, max_len);
        ReportItem ri;
        ri.what = name + ": local confluence at overlap length " + std::to_string(max_len);
        if (!issues.empty()) {
            ri.verdict = Verdict::Fail;
            ri.residual = issues[0].nf_left.str(*ds.symbols) + " vs " +
                          issues[0].nf_right.str(*ds.symbols) + " from overlap " +
                          issues[0].word.str(*p->quiver());
        }
        report.add(std::move(ri));
    }
    return report;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic verification engine for quiver algebroid stacks"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "text or machine")->expected(1);
    app.add_option("--max-degree", opt.max_degree, "completion degree bound");
    app.add_option("--max-rounds", opt.max_rounds, "completion round bound");

    std::string ds_path, elem_text, pres_name, target, gluing_name, arrows_csv;
    size_t max_k = 3, max_len = 4;

    auto* nf_cmd = app.add_subcommand("nf", "normal form of an element");
    nf_cmd->add_option("dataset", ds_path)->required();
    nf_cmd->add_option("element", elem_text)->required();
    nf_cmd->add_option("--presentation", pres_name);

    auto* check = app.add_subcommand("check", "run a verification");
    check->require_subcommand(1);
    std::vector<std::string> kinds = {"cocycle", "tetra", "rep",      "mc",
                                      "gluing",  "ainfty", "confluence"};
    std::map<std::string, CLI::App*> subs;
    for (const auto& k : kinds) {
        auto* c = check->add_subcommand(k);
        c->add_option("dataset", ds_path)->required();
        if (k == "ainfty") c->add_option("--max-k", max_k);
        if (k == "confluence") c->add_option("--max-len", max_len);
        subs[k] = c;
    }

    auto* functor_cmd = app.add_subcommand("functor", "mirror functor object + mc check");
    functor_cmd->add_option("dataset", ds_path)->required();
    functor_cmd->add_option("target", target)->required();
    functor_cmd->add_option("--gluing", gluing_name);

    auto* complete_cmd = app.add_subcommand("complete", "derive aux rules for a localization");
    complete_cmd->add_option("dataset", ds_path)->required();
    complete_cmd->add_option("--presentation", pres_name)->required();
    complete_cmd->add_option("--arrows", arrows_csv)->required();

    auto* report_cmd = app.add_subcommand("report", "re-render a machine report");
    report_cmd->add_option("file", ds_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (report_cmd->parsed()) {
            std::ifstream in(ds_path);
            if (!in) throw Error("cannot open report file: " + ds_path);
            std::stringstream ss;
            ss << in.rdbuf();
            Report r = Report::parse_machine(ss.str());
            return emit(r, opt);
        }

        Dataset ds = parse_dataset(ds_path);

        if (nf_cmd->parsed()) {
            std::string name = pres_name.empty() ? ds.default_presentation : pres_name;
            if (name.empty()) throw Error("no presentation named and no default set");
            auto p = ds.presentation(name);
            Element x = parse_element(elem_text, p->quiver(), *ds.symbols, ds.defines.get());
            std::cout << normal_form(*p, x).str(*ds.symbols) << "\n";
            return 0;
        }
        if (subs["cocycle"]->parsed()) return emit(check_cocycle(ds), opt);
        if (subs["tetra"]->parsed()) return emit(check_tetra(ds), opt);
        if (subs["rep"]->parsed()) return emit(check_rep(ds, opt), opt);
        if (subs["mc"]->parsed()) return emit(check_mc(ds), opt);
        if (subs["gluing"]->parsed()) return emit(check_gluing(ds), opt);
        if (subs["ainfty"]->parsed()) return emit(check_ainfty(ds, max_k), opt);
        if (subs["confluence"]->parsed()) return emit(check_confluence(ds, max_len), opt);
        if (functor_cmd->parsed()) {
            if (ds.gluings.empty()) throw Error("dataset has no gluing section");
            const GluingData& g = gluing_name.empty() ? ds.gluings.begin()->second
                                                      : ds.gluings.at(gluing_name);
            ExtendedEval ev(*g.sys, g.stack, g.b, 5);
            TwistedComplex f = mirror_functor_object(ev, g.alpha, g.sys->object(target));
            Report report("functor", ds.path);
            auto items = mc_check(f);
            if (items.empty()) {
                ReportItem ri;
                ri.what = "F(" + target + "): twisted complex verified";
                report.add(std::move(ri));
            }
            for (const auto& item : items) {
                ReportItem ri;
                ri.what = "F(" + target + ") cell " + item.src_label + " -> " + item.dst_label;
                ri.verdict = Verdict::Fail;
                report.add(std::move(ri));
            }
            return emit(report, opt);
        }
        if (complete_cmd->parsed()) {
            auto p = ds.presentation(pres_name);
            std::vector<int> ids;
            std::stringstream ss(arrows_csv);
            std::string tok;
            while (std::getline(ss, tok, ','))
                ids.push_back(p->quiver()->arrow(tok));
            auto plain = localize(*p, ids, {});
            for (const auto& r : complete_rules(*plain, opt.max_degree, 8))
                std::cout << r.lhs.str(*plain->quiver()) << " => " << r.rhs.str(*ds.symbols)
                          << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
