// Regenerates the bundled datasets under data/. The auxiliary confluence rules
// are derived by bounded completion; everything else is entered from the
// construction data, with the i = 1, 2 charts produced from the i = 3 entries
// by the cyclic substitution of variables.
#include "../tests/test_fixtures.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace qstack;
using nlohmann::ordered_json;

namespace {

ordered_json aux_rules_json(const Presentation& base, const std::vector<std::string>& names) {
    std::vector<int> ids;
    for (const auto& n : names) ids.push_back(base.quiver()->arrow(n));
    auto plain = localize(base, ids, {});
    ordered_json out = ordered_json::array();
    for (const auto& r : complete_rules(*plain, 6, 8))
        out.push_back({r.lhs.str(*plain->quiver()), r.rhs.str(*base.symbols())});
    return out;
}

std::string subst_tokens(const std::string& text, const std::map<std::string, std::string>& m) {
    std::istringstream in(text);
    std::string tok, out;
    while (in >> tok) {
        auto it = m.find(tok);
        if (!out.empty()) out += " ";
        out += it == m.end() ? tok : it->second;
    }
    return out;
}

// one cyclic step sigma: (z3,x3,w3)->(y2,z2,w2)->(x1,y1,w1)->(z3,x3,w3) on the
// chart letters and a->b->c->a on the coefficient letters; step 2 applies it twice
std::map<std::string, std::string> cycle_map(int step) {
    std::map<std::string, std::string> sigma = {
        {"z3", "y2"}, {"x3", "z2"}, {"w3", "w2"},
        {"y2", "x1"}, {"z2", "y1"}, {"w2", "w1"},
        {"x1", "z3"}, {"y1", "x3"}, {"w1", "w3"}};
    for (const char* fam : {"a", "b", "c"})
        for (const char* idx : {"1", "2", "3"}) {
            std::string from = std::string(fam) + idx;
            std::string to = std::string(1, fam[0] == 'a' ? 'b' : fam[0] == 'b' ? 'c' : 'a') + idx;
            sigma[from] = to;
        }
    std::map<std::string, std::string> m = sigma;
    if (step == 2)
        for (auto& [k, v] : m) v = sigma.at(v);
    std::map<std::string, std::string> full;
    for (auto& [k, v] : m) {
        full[k] = v;
        full[k + "^-1"] = v + "^-1";
    }
    return full;
}

void write(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
    std::cout << "wrote " << path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "data";
    auto tab = fixtures::symbols();
    auto A0 = fixtures::chart_A0(tab);
    auto A1 = fixtures::chart_seidel(1, tab);
    auto A2 = fixtures::chart_seidel(2, tab);
    auto A3 = fixtures::chart_seidel(3, tab);

    // ---------------------------------------------------------------- free_proj
    {
        ordered_json j;
        j["symbols"] = ordered_json::array();
        j["quivers"]["Qproj"] = {
            {"vertices", {"n0", "n1"}},
            {"arrows", {{"p0", "n0", "n1"}, {"p1", "n0", "n1"}, {"p2", "n0", "n1"}}}};
        j["quivers"]["Qchart"] = {
            {"vertices", {"s"}},
            {"arrows", {{"X1", "s", "s"}, {"X2", "s", "s"}}}};
        j["presentations"]["F"] = {{"quiver", "Qproj"}, {"order", {"p0", "p1", "p2"}}};
        j["presentations"]["Fc"] = {{"quiver", "Qchart"}, {"order", {"X1", "X2"}}};
        j["default_presentation"] = "F";
        ordered_json st;
        st["charts"] = ordered_json::array(
            {ordered_json::array({"C0", "F"}), ordered_json::array({"C1", "Fc"})});
        st["pair_localizations"] = ordered_json::array({ordered_json::array(
            {"C0", "C1", ordered_json::array({"p0"})})});
        ordered_json g01;
        g01["vertices"] = ordered_json{{"s", "n0"}};
        g01["arrows"] = ordered_json{{"X1", "p0^-1 p1"}, {"X2", "p0^-1 p2"}};
        ordered_json g10;
        g10["vertices"] = ordered_json{{"n0", "s"}, {"n1", "s"}};
        g10["arrows"] =
            ordered_json{{"p0", "e(s)"}, {"p1", "X1"}, {"p2", "X2"}, {"p0^-1", "e(s)"}};
        st["transitions"] = ordered_json::array({ordered_json::array({"C0", "C1", g01}),
                                                 ordered_json::array({"C1", "C0", g10})});
        // chart function: c(n0) = e(n0) (corrected from the degenerate 0), c(n1) = p0^-1
        st["gerbes"] = ordered_json::array(
            {ordered_json::array({"C0", "C1", "C0", "n1", "p0^-1", "p0"})});
        j["stacks"]["freeproj"] = st;
        write(dir + "/free_proj.qs", j);
    }

    // ------------------------------------------------------------------- nc_c3
    {
        ordered_json j;
        j["symbols"] = {"A", "B", "hbar"};
        j["quivers"]["Qc3"] = {
            {"vertices", {"s"}},
            {"arrows", {{"x", "s", "s"}, {"y", "s", "s"}, {"z", "s", "s"}}}};
        for (int i = 1; i <= 3; ++i) {
            auto q = fixtures::seidel_quiver(i);
            ordered_json arr = ordered_json::array();
            for (int a = 0; a < (int)q->num_arrows(); ++a)
                arr.push_back({q->arrow_info(a).name, "s" + std::to_string(i),
                               "s" + std::to_string(i)});
            j["quivers"]["Qs" + std::to_string(i)] = {
                {"vertices", {"s" + std::to_string(i)}}, {"arrows", arr}};
        }
        j["presentations"]["qc3"] = {
            {"quiver", "Qc3"},
            {"order", {"x", "y", "z"}},
            {"rules",
             ordered_json::array({ordered_json::array({"y x", "T^(A - B) x y"}),
                                  ordered_json::array({"z y", "T^(A - B) y z"}),
                                  ordered_json::array({"z x", "T^(B - A) x z"})})}};
        const char* phis[4] = {nullptr, "y1 x1 w1|x1 y1 w1", "z2 y2 w2|y2 z2 w2",
                               "x3 z3 w3|z3 x3 w3"};
        for (int i = 1; i <= 3; ++i) {
            std::string pos = std::string(phis[i]).substr(0, std::string(phis[i]).find('|'));
            std::string neg = std::string(phis[i]).substr(std::string(phis[i]).find('|') + 1);
            j["superpotentials"]["Phi" + std::to_string(i)] = {
                {"quiver", "Qs" + std::to_string(i)},
                {"terms", ordered_json::array(
                              {ordered_json::array({"1", pos}),
                               ordered_json::array({"-1 T^(-3*hbar)", neg})})}};
            ordered_json prec = ordered_json::array();
            for (const auto& n : fixtures::seidel_precedence(i)) prec.push_back(n);
            j["presentations"]["S" + std::to_string(i)] = {
                {"quiver", "Qs" + std::to_string(i)},
                {"order", prec},
                {"jacobi", "Phi" + std::to_string(i)}};
        }
        j["default_presentation"] = "S3";
        write(dir + "/nc_c3.qs", j);
    }

    // ------------------------------------------------------------ nc_kp2_stack
    ordered_json kp2;
    {
        ordered_json& j = kp2;
        j["symbols"] = {"A1", "A5", "hbar"};
        j["defines"] = {{"B", "2*A1 + 2*A5"},
                        {"A1p", "A1 - hbar"},
                        {"A5p", "A5"},
                        {"A3p", "2*hbar"}};
        // quivers
        {
            auto q0 = fixtures::kp2_quiver();
            ordered_json arr = ordered_json::array();
            for (int a = 0; a < (int)q0->num_arrows(); ++a) {
                const Arrow& ar = q0->arrow_info(a);
                arr.push_back({ar.name, q0->vertex_name(ar.tail), q0->vertex_name(ar.head)});
            }
            j["quivers"]["Q0"] = {{"vertices", {"v1", "v2", "v3"}}, {"arrows", arr}};
            for (int i = 1; i <= 3; ++i) {
                auto q = fixtures::seidel_quiver(i);
                ordered_json ai = ordered_json::array();
                for (int a = 0; a < (int)q->num_arrows(); ++a)
                    ai.push_back({q->arrow_info(a).name, "s" + std::to_string(i),
                                  "s" + std::to_string(i)});
                j["quivers"]["Qs" + std::to_string(i)] = {
                    {"vertices", {"s" + std::to_string(i)}}, {"arrows", ai}};
            }
        }
        j["superpotentials"]["Phi0"] = {
            {"quiver", "Q0"},
            {"terms", ordered_json::array(
                          {ordered_json::array({"-1 T^(hbar)", "b1 c3 a2"}),
                           ordered_json::array({"-1 T^(hbar)", "a1 b3 c2"}),
                           ordered_json::array({"-1 T^(hbar)", "c1 a3 b2"}),
                           ordered_json::array({"1", "c1 b3 a2"}),
                           ordered_json::array({"1", "b1 a3 c2"}),
                           ordered_json::array({"1", "a1 c3 b2"})})}};
        const char* sphis[4] = {nullptr, "y1 x1 w1|x1 y1 w1", "z2 y2 w2|y2 z2 w2",
                                "x3 z3 w3|z3 x3 w3"};
        for (int i = 1; i <= 3; ++i) {
            std::string pos = std::string(sphis[i]).substr(0, std::string(sphis[i]).find('|'));
            std::string neg = std::string(sphis[i]).substr(std::string(sphis[i]).find('|') + 1);
            j["superpotentials"]["Phi" + std::to_string(i)] = {
                {"quiver", "Qs" + std::to_string(i)},
                {"terms", ordered_json::array(
                              {ordered_json::array({"1", pos}),
                               ordered_json::array({"-1 T^(-3*hbar)", neg})})}};
        }
        ordered_json prec0 = ordered_json::array();
        for (const auto& n : fixtures::kp2_precedence()) prec0.push_back(n);
        j["presentations"]["A0"] = {{"quiver", "Q0"}, {"order", prec0}, {"jacobi", "Phi0"}};
        for (int i = 1; i <= 3; ++i) {
            ordered_json prec = ordered_json::array();
            for (const auto& n : fixtures::seidel_precedence(i)) prec.push_back(n);
            j["presentations"]["A" + std::to_string(i)] = {
                {"quiver", "Qs" + std::to_string(i)},
                {"order", prec},
                {"jacobi", "Phi" + std::to_string(i)}};
        }
        // localized A0 charts with derived aux rules, for the standalone reps
        const char* locsets[4] = {nullptr, "a", "c", "b"};
        for (int i = 1; i <= 3; ++i) {
            std::string l(1, locsets[i][0]);
            std::vector<std::string> arrows = {l + "1", l + "3"};
            j["presentations"]["A0_U" + std::to_string(i)] = {
                {"localize", "A0"},
                {"arrows", ordered_json::array({arrows[0], arrows[1]})},
                {"aux_rules", aux_rules_json(*A0, arrows)}};
        }
        j["default_presentation"] = "A0";

        fixtures::KP2Charts cc{tab, fixtures::defines(*tab), A0, A1, A2, A3,
                               fixtures::localize_completed(*A0, {"a1", "a3"}),
                               fixtures::localize_completed(*A0, {"c1", "c3"}),
                               fixtures::localize_completed(*A0, {"b1", "b3"})};

        // standalone representations G0i (criterion 4 checks G01)
        for (int i = 1; i <= 3; ++i) {
            QuiverRep g = fixtures::make_G0i(cc, i);
            // re-expressed textually against the dataset presentations
            ordered_json r;
            r["source"] = "A" + std::to_string(i);
            r["target"] = "A0_U" + std::to_string(i);
            r["vertices"] = ordered_json{{"s" + std::to_string(i), "v2"}};
            ordered_json arrows;
            for (int a = 0; a < (int)g.source()->quiver()->num_arrows(); ++a)
                if (g.has_arrow_image(a))
                    arrows[g.source()->quiver()->arrow_info(a).name] =
                        g.arrow_image(a).str(*tab);
            r["arrows"] = arrows;
            j["representations"]["G0" + std::to_string(i)] = r;
        }

        // the stack Yhat
        ordered_json st;
        st["charts"] = ordered_json::array({ordered_json::array({"A0", "A0"}),
                                            ordered_json::array({"A1", "A1"}),
                                            ordered_json::array({"A2", "A2"}),
                                            ordered_json::array({"A3", "A3"})});
        st["pair_localizations"] = ordered_json::array();
        auto pl = [&](const char* a, const char* b, std::vector<std::string> arrows) {
            ordered_json row = ordered_json::array();
            row.push_back(a);
            row.push_back(b);
            row.push_back(arrows);
            st["pair_localizations"].push_back(row);
        };
        pl("A0", "A1", {"a1", "a3"});
        pl("A0", "A2", {"c1", "c3"});
        pl("A0", "A3", {"b1", "b3"});
        pl("A1", "A2", {"x1"});
        pl("A1", "A3", {"y1"});
        pl("A2", "A1", {"z2"});
        pl("A2", "A3", {"y2"});
        pl("A3", "A1", {"z3"});
        pl("A3", "A2", {"x3"});
        st["aux_rules"] = ordered_json::array();
        auto aux = [&](const char* chart, const Presentation& base,
                       std::vector<std::string> arrows) {
            ordered_json row = ordered_json::array();
            row.push_back(chart);
            row.push_back(arrows);
            row.push_back(aux_rules_json(base, arrows));
            st["aux_rules"].push_back(row);
        };
        aux("A0", *A0, {"a1", "a3"});
        aux("A0", *A0, {"c1", "c3"});
        aux("A0", *A0, {"b1", "b3"});
        aux("A0", *A0, {"a1", "a3", "c1", "c3"});
        aux("A0", *A0, {"a1", "a3", "b1", "b3"});
        aux("A0", *A0, {"b1", "b3", "c1", "c3"});
        aux("A0", *A0, {"a1", "a3", "b1", "b3", "c1", "c3"});
        aux("A1", *A1, {"x1"});
        aux("A1", *A1, {"y1"});
        aux("A1", *A1, {"x1", "y1"});
        aux("A2", *A2, {"z2"});
        aux("A2", *A2, {"y2"});
        aux("A2", *A2, {"y2", "z2"});
        aux("A3", *A3, {"z3"});
        aux("A3", *A3, {"x3"});
        aux("A3", *A3, {"x3", "z3"});
        st["transitions"] = ordered_json::array();
        auto add_tr = [&](const char* dst, const char* src, const QuiverRep& g) {
            ordered_json body;
            ordered_json verts, arrows;
            for (int v = 0; v < (int)g.source()->quiver()->num_vertices(); ++v)
                verts[g.source()->quiver()->vertex_name(v)] =
                    g.target()->quiver()->vertex_name(g.vertex_image(v));
            for (int a = 0; a < (int)g.source()->quiver()->num_arrows(); ++a)
                if (g.has_arrow_image(a))
                    arrows[g.source()->quiver()->arrow_info(a).name] =
                        g.arrow_image(a).str(*tab);
            body["vertices"] = verts;
            body["arrows"] = arrows;
            ordered_json row = ordered_json::array();
            row.push_back(dst);
            row.push_back(src);
            row.push_back(body);
            st["transitions"].push_back(row);
        };
        add_tr("A0", "A1", fixtures::make_G0i(cc, 1));
        add_tr("A0", "A2", fixtures::make_G0i(cc, 2));
        add_tr("A0", "A3", fixtures::make_G0i(cc, 3));
        add_tr("A1", "A0", fixtures::make_Gi0(cc, 1));
        add_tr("A2", "A0", fixtures::make_Gi0(cc, 2));
        add_tr("A3", "A0", fixtures::make_Gi0(cc, 3));
        for (int i = 1; i <= 3; ++i)
            for (int k = 1; k <= 3; ++k) {
                if (i == k) continue;
                ordered_json row = ordered_json::array();
                row.push_back("A" + std::to_string(i));
                row.push_back("A" + std::to_string(k));
                row.push_back(ordered_json{{"compose", "A0"}});
                st["transitions"].push_back(row);
            }
        st["gerbes"] = ordered_json::array();
        auto gerbe = [&](std::string i, std::string jj, std::string k, std::string v,
                         std::string c, std::string cinv) {
            st["gerbes"].push_back(ordered_json::array({i, jj, k, v, c, cinv}));
        };
        gerbe("A0", "A1", "A0", "v1", "a1", "a1^-1");
        gerbe("A0", "A1", "A0", "v3", "a1 a3", "a3^-1 a1^-1");
        gerbe("A0", "A2", "A0", "v1", "c1", "c1^-1");
        gerbe("A0", "A2", "A0", "v3", "c1 c3", "c3^-1 c1^-1");
        gerbe("A0", "A3", "A0", "v1", "b1", "b1^-1");
        gerbe("A0", "A3", "A0", "v3", "b1 b3", "b3^-1 b1^-1");
        // c_{ij0}(v) = G_{i0}(c_{0j0}(v))
        struct GV { const char* i; const char* jj; const char* v1; const char* v1i;
                    const char* v3; const char* v3i; };
        std::vector<GV> gs = {
            {"A1", "A2", "T^(B/2) x1", "T^(-B/2) x1^-1", "T^(B + hbar) x1 x1",
             "T^(-B - hbar) x1^-1 x1^-1"},
            {"A1", "A3", "T^(B/2 + hbar) y1", "T^(-B/2 - hbar) y1^-1",
             "T^(B + hbar) y1 y1", "T^(-B - hbar) y1^-1 y1^-1"},
            {"A2", "A1", "T^(B/2 + hbar) z2", "T^(-B/2 - hbar) z2^-1",
             "T^(B + hbar) z2 z2", "T^(-B - hbar) z2^-1 z2^-1"},
            {"A2", "A3", "T^(B/2) y2", "T^(-B/2) y2^-1", "T^(B + hbar) y2 y2",
             "T^(-B - hbar) y2^-1 y2^-1"},
            {"A3", "A1", "T^(B/2) z3", "T^(-B/2) z3^-1", "T^(B + hbar) z3 z3",
             "T^(-B - hbar) z3^-1 z3^-1"},
            {"A3", "A2", "T^(B/2 + hbar) x3", "T^(-B/2 - hbar) x3^-1",
             "T^(B + hbar) x3 x3", "T^(-B - hbar) x3^-1 x3^-1"},
        };
        for (const auto& g : gs) {
            gerbe(g.i, g.jj, "A0", "v1", g.v1, g.v1i);
            gerbe(g.i, g.jj, "A0", "v3", g.v3, g.v3i);
        }
        j["stacks"]["Yhat"] = st;
        j["stacks"]["Y"] = {{"restrict_of", "Yhat"},
                            {"keep", ordered_json::array({"A1", "A2", "A3"})},
                            {"hub", "A0"}};

        // the gluing system (objects L, S1..S3 and the isomorphism pairs)
        ordered_json gl;
        gl["stack"] = "Yhat";
        gl["objects"] = ordered_json::array({ordered_json::array({"L", "A0"}),
                                             ordered_json::array({"S1", "A1"}),
                                             ordered_json::array({"S2", "A2"}),
                                             ordered_json::array({"S3", "A3"})});
        ordered_json pairs = ordered_json::array();
        {
            ordered_json p;
            p["from"] = "L";
            p["to"] = "L";
            ordered_json gens = ordered_json::array();
            gens.push_back({"one1", 0, "v1", "v1"});
            gens.push_back({"one2", 0, "v2", "v2"});
            gens.push_back({"one3", 0, "v3", "v3"});
            auto q0 = fixtures::kp2_quiver();
            for (const char* n : {"a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"}) {
                const Arrow& ar = q0->arrow_info(q0->arrow(n));
                gens.push_back({std::string("G_") + n, 1, q0->vertex_name(ar.tail),
                                q0->vertex_name(ar.head)});
            }
            for (const char* n : {"a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"}) {
                const Arrow& ar = q0->arrow_info(q0->arrow(n));
                gens.push_back({std::string("D_") + n, 2, q0->vertex_name(ar.head),
                                q0->vertex_name(ar.tail)});
            }
            p["gens"] = gens;
            pairs.push_back(p);
        }
        const char* letters[4][3] = {{}, {"x1", "y1", "w1"}, {"y2", "z2", "w2"},
                                     {"z3", "x3", "w3"}};
        for (int i = 1; i <= 3; ++i) {
            ordered_json p;
            p["from"] = "S" + std::to_string(i);
            p["to"] = "S" + std::to_string(i);
            ordered_json gens = ordered_json::array();
            std::string sv = "s" + std::to_string(i);
            gens.push_back({"one", 0, sv, sv});
            for (int k = 0; k < 3; ++k)
                gens.push_back({std::string("G_") + letters[i][k], 1, sv, sv});
            for (int k = 0; k < 3; ++k)
                gens.push_back({std::string("D_") + letters[i][k], 2, sv, sv});
            gens.push_back({"pt", 3, sv, sv});
            p["gens"] = gens;
            pairs.push_back(p);
            ordered_json pf;
            pf["from"] = "L";
            pf["to"] = "S" + std::to_string(i);
            pf["gens"] = {{"Q2", 0, "v2", sv},
                          {"P2", 1, "v2", sv},
                          {"P1a", 1, "v1", sv},
                          {"P1b", 1, "v1", sv}};
            pairs.push_back(pf);
            ordered_json pb;
            pb["from"] = "S" + std::to_string(i);
            pb["to"] = "L";
            pb["gens"] = {{"P3b", 0, sv, "v3"},
                          {"Q3b", 1, sv, "v3"},
                          {"Q1a", 1, sv, "v1"},
                          {"Q1b", 1, sv, "v1"}};
            pairs.push_back(pb);
        }
        gl["pairs"] = pairs;
        auto upair = [](const char* a, const char* b) {
            return ordered_json::array({a, b});
        };
        gl["units"] = ordered_json::array(
            {ordered_json::array({"L", ordered_json::array({upair("v1", "L.L.one1"),
                                                            upair("v2", "L.L.one2"),
                                                            upair("v3", "L.L.one3")})}),
             ordered_json::array({"S1", ordered_json::array({upair("s1", "S1.S1.one")})}),
             ordered_json::array({"S2", ordered_json::array({upair("s2", "S2.S2.one")})}),
             ordered_json::array({"S3", ordered_json::array({upair("s3", "S3.S3.one")})})});
        ordered_json consts = ordered_json::array();
        auto C = [&](std::vector<std::string> ins, std::string coeff, std::string out) {
            ordered_json c;
            c["inputs"] = ins;
            c["coeff"] = coeff;
            c["out"] = out;
            consts.push_back(c);
        };
        // CF(L,L): products from the Phi0 polygon families
        {
            struct Term { const char* x; const char* y; const char* z; const char* cf; };
            std::vector<Term> terms = {
                {"b1", "c3", "a2", "-1 T^(hbar)"}, {"a1", "b3", "c2", "-1 T^(hbar)"},
                {"c1", "a3", "b2", "-1 T^(hbar)"}, {"c1", "b3", "a2", "1"},
                {"b1", "a3", "c2", "1"},           {"a1", "c3", "b2", "1"}};
            for (const auto& t : terms) {
                C({std::string("L.L.G_") + t.z, std::string("L.L.G_") + t.y}, t.cf,
                  std::string("L.L.D_") + t.x);
                C({std::string("L.L.G_") + t.x, std::string("L.L.G_") + t.z}, t.cf,
                  std::string("L.L.D_") + t.y);
                C({std::string("L.L.G_") + t.y, std::string("L.L.G_") + t.x}, t.cf,
                  std::string("L.L.D_") + t.z);
            }
        }
        const char* roles[4][3] = {{}, {"c", "a", "b"}, {"b", "c", "a"}, {"a", "b", "c"}};
        for (int i = 1; i <= 3; ++i) {
            std::string S = "S" + std::to_string(i);
            std::string Z = letters[i][0], X = letters[i][1], W = letters[i][2];
            std::string A = roles[i][0], Bl = roles[i][1], Cl = roles[i][2];
            auto Si = [&](std::string n) { return S + "." + S + "." + n; };
            auto L_ = [&](std::string n) { return std::string("L.L.") + n; };
            auto F = [&](std::string n) { return std::string("L.") + S + "." + n; };
            auto Bk = [&](std::string n) { return S + ".L." + n; };
            // Seidel endomorphism products
            C({Si("G_" + Z), Si("G_" + X)}, "-1 T^(A1 + 2*hbar)", Si("D_" + W));
            C({Si("G_" + X), Si("G_" + Z)}, "T^(A1 - hbar)", Si("D_" + W));
            C({Si("G_" + X), Si("G_" + W)}, "-1 T^(A1 + 2*hbar)", Si("D_" + Z));
            C({Si("G_" + W), Si("G_" + X)}, "T^(A1 - hbar)", Si("D_" + Z));
            C({Si("G_" + W), Si("G_" + Z)}, "-1 T^(A1 + 2*hbar)", Si("D_" + X));
            C({Si("G_" + Z), Si("G_" + W)}, "T^(A1 - hbar)", Si("D_" + X));
            // m1(alpha_i) pairs
            C({F("Q2"), Si("G_" + W)}, "1", F("P2"));
            C({L_("G_" + Bl + "2"), L_("G_" + Bl + "3"), L_("G_" + Bl + "1"), F("Q2")},
              "-1 T^(B)", F("P2"));
            C({L_("G_" + A + "1"), F("Q2")}, "-1", F("P1a"));
            C({L_("G_" + Bl + "1"), F("Q2"), Si("G_" + Z)}, "T^(B/2)", F("P1a"));
            C({L_("G_" + Cl + "1"), F("Q2")}, "-1", F("P1b"));
            C({L_("G_" + Bl + "1"), F("Q2"), Si("G_" + X)}, "T^(B/2 + hbar)", F("P1b"));
            // m1(beta_i) pairs (cyclic mirrors; the source figures are not available)
            C({Si("G_" + W), Bk("P3b")}, "1", Bk("Q3b"));
            C({Bk("P3b"), L_("G_" + Bl + "2"), L_("G_" + Bl + "3"), L_("G_" + Bl + "1")},
              "-1 T^(B)", Bk("Q3b"));
            C({Si("G_" + Z), Bk("P3b")}, "T^(B/2 + hbar)", Bk("Q1a"));
            C({Bk("P3b"), L_("G_" + A + "3")}, "-1", Bk("Q1a"));
            C({Si("G_" + X), Bk("P3b")}, "T^(B/2)", Bk("Q1b"));
            C({Bk("P3b"), L_("G_" + Cl + "3")}, "-1", Bk("Q1b"));
            // isomorphism products
            C({Bk("P3b"), L_("G_" + Bl + "3"), L_("G_" + Bl + "1"), F("Q2")}, "-1 T^(B)",
              Si("one"));
            C({L_("G_" + Bl + "1"), F("Q2"), Bk("P3b"), L_("G_" + Bl + "3")}, "-1 T^(B)",
              L_("one1"));
            C({F("Q2"), Bk("P3b"), L_("G_" + Bl + "3"), L_("G_" + Bl + "1")}, "-1 T^(B)",
              L_("one2"));
            C({L_("G_" + Bl + "3"), L_("G_" + Bl + "1"), F("Q2"), Bk("P3b")}, "-1 T^(B)",
              L_("one3"));
        }
        gl["constants"] = consts;
        ordered_json def;
        def["truncation"] = 8;
        ordered_json parts;
        {
            ordered_json lp = ordered_json::array();
            for (const char* n : {"a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"})
                lp.push_back(ordered_json::array({n, std::string("L.L.G_") + n}));
            parts["L"] = lp;
            for (int i = 1; i <= 3; ++i) {
                ordered_json sp = ordered_json::array();
                std::string S = "S" + std::to_string(i);
                for (int k = 0; k < 3; ++k)
                    sp.push_back(ordered_json::array(
                        {letters[i][k], S + "." + S + ".G_" + letters[i][k]}));
                parts[S] = sp;
            }
        }
        def["parts"] = parts;
        gl["deformation"] = def;
        ordered_json alphas = ordered_json::array();
        for (int i = 1; i <= 3; ++i) {
            std::string S = "S" + std::to_string(i);
            ordered_json a;
            a["from"] = "L";
            a["to"] = S;
            a["terms"] = ordered_json::array(
                {ordered_json::array({"- e(v2)", "L." + S + ".Q2"})});
            alphas.push_back(a);
            ordered_json b;
            b["from"] = S;
            b["to"] = "L";
            b["terms"] = ordered_json::array({ordered_json::array(
                {"T^(-B) e(s" + std::to_string(i) + ")", S + ".L.P3b"})});
            alphas.push_back(b);
        }
        gl["alphas"] = alphas;
        j["gluings"]["kp2"] = gl;
        write(dir + "/nc_kp2_stack.qs", j);
    }

    // ------------------------------------------------------------ nc_kp2_bundle
    {
        ordered_json j;
        // reuse the chart/stack sections of the stack dataset
        j["symbols"] = kp2["symbols"];
        j["defines"] = kp2["defines"];
        j["quivers"] = kp2["quivers"];
        j["superpotentials"] = kp2["superpotentials"];
        j["presentations"] = kp2["presentations"];
        j["presentations"]["A0_all"] = {
            {"localize", "A0"},
            {"arrows", {"a1", "a3", "b1", "b3", "c1", "c3"}},
            {"aux_rules",
             aux_rules_json(*A0, {"a1", "a3", "b1", "b3", "c1", "c3"})}};
        j["default_presentation"] = "A0";
        j["stacks"] = kp2["stacks"];

        ordered_json tw;
        tw["stack"] = "Y";
        tw["op_presentation"] = "A0_all";
        ordered_json modules = ordered_json::array();
        for (int i = 1; i <= 3; ++i) {
            std::string sv = "s" + std::to_string(i);
            ordered_json gens = {{"Q2", sv, 0, "v2"},  {"P2", sv, 1, "v2"},
                                 {"P1a", sv, 1, "v1"}, {"P1b", sv, 1, "v1"},
                                 {"Q3", sv, 2, "v3"},  {"Q1b", sv, 2, "v1"},
                                 {"Q1a", sv, 2, "v1"}, {"P3", sv, 3, "v3"}};
            modules.push_back(ordered_json::array({"A" + std::to_string(i), gens}));
        }
        tw["modules"] = modules;

        // cells for i = 3 entered from the computation tables; i = 1, 2 by the
        // cyclic substitution of variables
        using Entry = std::tuple<std::string, std::string, std::string>;
        std::vector<Entry> a3 = {
            {"Q2", "P2", "w3 * _ - T^(B) _ * b1 b3 b2"},
            {"Q2", "P1a", "- _ * a1 + T^(B/2) z3 * _ * b1"},
            {"Q2", "P1b", "- _ * c1 + T^(B/2 + hbar) x3 * _ * b1"},
            {"P2", "Q1b", "- T^(A1) _ * c1 + T^(2*A1 - 2*hbar + A5) x3 * _ * b1"},
            {"P2", "Q1a", "T^(A1 - hbar) _ * a1 - T^(2*A1 + A5 + 2*hbar) z3 * _ * b1"},
            {"P1a", "Q3", "T^(A1 - hbar) _ * c3 - T^(2*A1 + 2*hbar + A5) x3 * _ * b3"},
            {"P1a", "Q1a", "T^(A1 - hbar) w3 * _ - T^(3*A1 + 2*A5 + 2*hbar) _ * b3 b2 b1"},
            {"P1b", "Q3", "- T^(A1) _ * a3 + T^(2*A1 + A5 - 2*hbar) z3 * _ * b3"},
            {"P1b", "Q1b", "- T^(A1) w3 * _ + T^(3*A1 + 2*A5 - 3*hbar) _ * b3 b2 b1"},
            {"Q3", "P3", "w3 * _ - T^(B) _ * b2 b1 b3"},
            {"Q1b", "P3", "- _ * a3 + T^(B/2 + hbar) z3 * _ * b3"},
            {"Q1a", "P3", "- _ * c3 + T^(B/2) x3 * _ * b3"},
        };
        std::vector<Entry> a32 = {
            {"Q2", "Q2", "_"},
            {"P2", "P2", "- T^(-B/2 + hbar) b1 b3 c3^-1 c1^-1 x3^-1 * _"},
            {"P1a", "P2",
             "T^(B) _ * b3 b2 + T^(B + hbar) b1 c1^-1 _ * c3 b2 + T^(B + 2*hbar) b1 b3 "
             "c3^-1 c1^-1 _ * c3 c2"},
            {"P1a", "P1a", "- T^(B/2) z3 * _"},
            {"P1a", "P1b", "- T^(B/2 + hbar) x3 * _"},
            {"P1b", "P1a", "_"},
            {"Q3", "Q3", "T^(A1 + A5 + 2*hbar) x3 * _"},
            {"Q3", "Q1a",
             "T^(B + 2*hbar) _ * b2 b1 + T^(B + hbar) b1 c1^-1 _ * c2 b1 + T^(B) b1 b3 "
             "c3^-1 c1^-1 _ * c2 c1"},
            {"Q1b", "Q1a", "- T^(-B/2) b1 b3 c3^-1 c1^-1 x3^-1 * _"},
            {"Q1a", "Q1b", "b1 b3 c3^-1 c1^-1 _"},
            {"Q1a", "Q1a", "- T^(-2*hbar) b1 b3 c3^-1 c1^-1 z3 x3^-1 * _"},
            {"P3", "P3", "b1 b3 c3^-1 c1^-1 _"},
        };
        std::vector<Entry> a23 = {
            {"Q2", "Q2", "_"},
            {"P2", "P2", "- T^(-B/2 - 2*hbar) c1 c3 b3^-1 b1^-1 y2^-1 * _"},
            {"P1a", "P1b", "_"},
            {"P1b", "P2",
             "T^(B) _ * c3 c2 + T^(B - hbar) c1 b1^-1 _ * b3 c2 + T^(B/2 - hbar) c1 c3 "
             "b3^-1 b1^-1 _ * b3 b2"},
            {"P1b", "P1a", "- T^(B/2) y2 * _"},
            {"P1b", "P1b", "- T^(B/2 + hbar) z2 * _"},
            {"Q3", "Q3", "T^(B/2 - hbar) y2 * _"},
            {"Q3", "Q1b",
             "T^(B/2 - hbar) _ * c2 c1 + T^(B - hbar) c1 b1^-1 _ * b2 c1 + T^(B) c1 c3 "
             "b3^-1 b1^-1 _ * b2 b1"},
            {"Q1b", "Q1b", "- T^(-hbar) c1 c3 b3^-1 b1^-1 z2 y2^-1 * _"},
            {"Q1b", "Q1a", "c1 c3 b3^-1 b1^-1 _"},
            {"Q1a", "Q1b", "- T^(-B/2 - hbar) c1 c3 b3^-1 b1^-1 y2^-1 * _"},
            {"P3", "P3", "c1 c3 b3^-1 b1^-1 _"},
        };
        std::vector<Entry> a321 = {
            {"Q3", "P2",
             "T^(A1 + 2*A5 + hbar) b1 b3 c3^-1 a1^-1 _ * a2 + T^(A1 + 2*A5 + hbar) b1 "
             "c1^-1 _ * b2 + T^(A1 + 2*A5 + 2*hbar) b1 b3 c3^-1 c1^-1 _ * c2"},
        };

        ordered_json cells = ordered_json::array();
        auto add_cell = [&](std::vector<std::string> tuple, const std::vector<Entry>& es,
                            const std::map<std::string, std::string>& m) {
            ordered_json c;
            c["tuple"] = tuple;
            ordered_json entries = ordered_json::array();
            for (const auto& [src, dst, text] : es)
                entries.push_back(
                    ordered_json::array({src, dst, m.empty() ? text : subst_tokens(text, m)}));
            c["entries"] = entries;
            cells.push_back(c);
        };
        std::map<std::string, std::string> id_map;
        auto c2 = cycle_map(1);
        auto c1 = cycle_map(2);
        add_cell({"A3"}, a3, id_map);
        add_cell({"A2"}, a3, c2);
        add_cell({"A1"}, a3, c1);
        add_cell({"A3", "A2"}, a32, id_map);
        add_cell({"A2", "A1"}, a32, c2);
        add_cell({"A1", "A3"}, a32, c1);
        add_cell({"A2", "A3"}, a23, id_map);
        add_cell({"A1", "A2"}, a23, c2);
        add_cell({"A3", "A1"}, a23, c1);
        add_cell({"A3", "A2", "A1"}, a321, id_map);
        add_cell({"A2", "A1", "A3"}, a321, c2);
        add_cell({"A1", "A3", "A2"}, a321, c1);
        // identity transition cells a_ii
        std::vector<Entry> ident;
        for (const char* g : {"Q2", "P2", "P1a", "P1b", "Q3", "Q1b", "Q1a", "P3"})
            ident.push_back({g, g, "_"});
        add_cell({"A1", "A1"}, ident, id_map);
        add_cell({"A2", "A2"}, ident, id_map);
        add_cell({"A3", "A3"}, ident, id_map);
        tw["cells"] = cells;
        j["twisted"]["U"] = tw;
        write(dir + "/nc_kp2_bundle.qs", j);
    }
    return 0;
}
