// canlink: exact computer algebra for compound-A_n sextic double solids and
// rank-2 toric 2-ray links.
//
// Subcommands: split, classify, family, toric-link. Reports are
// deterministic: identical inputs produce byte-identical output (timing is
// only included on request).

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "canlink/binforms.hpp"
#include "canlink/errors.hpp"
#include "canlink/poly.hpp"
#include "canlink/sds.hpp"
#include "canlink/singularity.hpp"
#include "canlink/splitting.hpp"
#include "canlink/toric.hpp"

using json = nlohmann::ordered_json;
using namespace canlink;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a:") + buf;
}

// Variable table from "name[:weight],..." or inferred from the text in
// order of first appearance.
TablePtr table_from_spec(const std::string& spec, const std::string& text) {
    std::vector<std::string> names;
    Weighting weights;
    if (!spec.empty()) {
        std::istringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto colon = item.find(':');
            if (colon == std::string::npos) {
                names.push_back(item);
                weights.push_back(1);
            } else {
                names.push_back(item.substr(0, colon));
                weights.push_back(std::stol(item.substr(colon + 1)));
            }
        }
        return VarTable::make(names, weights);
    }
    for (std::size_t i = 0; i < text.size();) {
        if (std::isalpha(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string name = text.substr(i, j - i);
            if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
            i = j;
        } else {
            ++i;
        }
    }
    if (names.empty()) throw PreconditionError("no variables found; pass --vars");
    return VarTable::make(names);
}

struct Report {
    json payload = json::object();
    std::string text;
};

void emit(const std::string& command, const std::string& digest, const Report& rep,
          const std::string& format, bool timing, double ms) {
    if (format == "json") {
        json out;
        out["command"] = command;
        out["inputs_digest"] = digest;
        out["version"] = kVersion;
        out["timing_ms"] = timing ? json(ms) : json(nullptr);
        out["results"] = rep.payload;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << rep.text;
        if (timing) std::cout << "time: " << ms << " ms\n";
    }
}

std::vector<Rat> parse_point(const std::string& spec, std::size_t n) {
    std::vector<Rat> out;
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(Rat::from_string(item));
    if (out.size() != n)
        throw PreconditionError("point has " + std::to_string(out.size()) + " coordinates, need " +
                                std::to_string(n));
    return out;
}

int run_split(const std::string& text, const std::string& varspec, const std::string& split_var,
              std::int64_t degree, const std::string& emit_what, std::size_t term_limit,
              Report& rep) {
    TablePtr table = table_from_spec(varspec, text);
    Poly f = parse_poly(text, table);

    // A comma-separated --var list runs the iterated split and reports the
    // final residual series.
    if (split_var.find(',') != std::string::npos) {
        std::vector<std::size_t> vars;
        std::istringstream ss(split_var);
        std::string item;
        while (std::getline(ss, item, ',')) vars.push_back(table->index_of(item));
        Poly h = iterated_split(f, vars, degree);
        rep.payload["split_vars"] = split_var;
        rep.payload["degree"] = degree;
        rep.payload["h"] = h.render();
        rep.text += "h = " + h.render() + "\n";
        return 0;
    }
    std::size_t var = table->index_of(split_var.empty() ? table->name(0) : split_var);

    SplitRequest req{f, var, degree, {}, term_limit};
    SplitSeries s = split(req);
    bool ok = verify_split(f, var, s);

    rep.payload["split_var"] = table->name(var);
    rep.payload["degree"] = degree;
    auto add = [&](const char* key, const Poly& p) {
        if (emit_what == "all" || emit_what == key) {
            rep.payload[key] = p.render();
            rep.text += std::string(key) + " = " + p.render() + "\n";
        }
    };
    add("h", s.h);
    add("g", s.g);
    add("p", s.p);
    add("v", s.v);
    if (emit_what == "all") {
        rep.payload["verify"] = ok;
        rep.text += std::string("verify: ") + (ok ? "true" : "false") + "\n";
    }
    return 0;
}

int run_classify(const std::string& text, const std::string& varspec, const std::string& point,
                 std::int64_t bound, Report& rep) {
    TablePtr table = table_from_spec(varspec, text);
    Poly f = parse_poly(text, table);
    GermPresentation germ{f, {}, bound};
    if (!point.empty()) germ.base_point = parse_point(point, table->size());
    GermReport r = classify_cAn(germ);

    rep.payload["quad_rank"] = r.quad_rank;
    std::string kind;
    switch (r.kind) {
        case GermKind::Smooth: kind = "smooth"; break;
        case GermKind::NotCA: kind = "not cA (corank > 2)"; break;
        case GermKind::Index: kind = "cA_" + std::to_string(r.index); break;
        case GermKind::IndexAtLeast: kind = "index >= " + std::to_string(r.index); break;
    }
    rep.payload["verdict"] = kind;
    if (r.kind == GermKind::Index || r.kind == GermKind::IndexAtLeast) {
        rep.payload["index"] = r.index;
        rep.payload["residual"] = r.residual_h.render();
    }
    if (!r.detail.empty()) rep.payload["detail"] = r.detail;
    rep.text = "quadratic rank: " + std::to_string(r.quad_rank) + "\nverdict: " + kind + "\n";
    if (r.kind == GermKind::Index)
        rep.text += "residual: " + r.residual_h.render() + "\n";
    return 0;
}

int run_family(const std::string& action, const std::string& family, const std::string& coeff_file,
               int jobs, Report& rep) {
    using namespace sds;
    if (action == "dims") {
        std::vector<FamilyId> ids =
            family == "all" ? all_families() : std::vector<FamilyId>{parse_family(family)};
        std::vector<std::pair<int, int>> dims(ids.size());
        auto work = [&](std::size_t i) {
            dims[i] = {param_dim(ids[i]), expected_moduli_dim(ids[i])};
        };
        if (jobs > 1) {
            std::vector<std::future<void>> fs;
            for (std::size_t i = 0; i < ids.size(); ++i)
                fs.push_back(std::async(std::launch::async, work, i));
            for (auto& f : fs) f.get();
        } else {
            for (std::size_t i = 0; i < ids.size(); ++i) work(i);
        }
        json rows = json::array();
        for (std::size_t i = 0; i < ids.size(); ++i) {
            json row;
            row["family"] = ids[i].str();
            row["parameter_dim"] = dims[i].first;
            row["expected_moduli_dim"] = dims[i].second;
            rows.push_back(row);
            rep.text += "family " + ids[i].str() + ": parameter dim " +
                        std::to_string(dims[i].first) + ", expected moduli dim " +
                        std::to_string(dims[i].second) + "\n";
        }
        rep.payload["dims"] = rows;
        return 0;
    }

    FamilyId id = parse_family(family);
    if (action == "construct") {
        if (coeff_file.empty()) {
            Poly f = apply_steps(generic_f(), condition_steps(id));
            rep.payload["f"] = f.render();
            rep.text = f.render() + "\n";
        } else {
            SDSCoefficients coeffs = parse_family_file(read_input(coeff_file));
            Poly f = concrete_f(coeffs);
            rep.payload["f"] = f.render();
            rep.text = f.render() + "\n";
        }
        return 0;
    }
    if (action == "check" || action == "generality") {
        if (coeff_file.empty()) throw PreconditionError(action + " needs a coefficient file");
        SDSCoefficients coeffs = parse_family_file(read_input(coeff_file));
        if (action == "check") {
            ConditionReport r = check_membership(coeffs, id);
            json checks = json::array();
            for (const auto& c : r.checks) {
                json item;
                item["condition"] = c.id;
                item["pass"] = c.pass;
                item["witness"] = c.witness;
                checks.push_back(item);
                rep.text += "condition " + c.id + ": " + (c.pass ? "pass" : "fail") +
                            (c.witness.empty() ? "" : " (" + c.witness + ")") + "\n";
            }
            rep.payload["checks"] = checks;
            rep.payload["member"] = r.member;
            rep.payload["verdict"] = r.verdict;
            rep.text += r.verdict + "\n";
        } else {
            GeneralityReport r = check_generality(id, coeffs);
            rep.payload["pass"] = r.pass;
            rep.payload["detail"] = r.detail;
            if (r.count) rep.payload["count"] = *r.count;
            rep.text = std::string(r.pass ? "pass" : "fail") + ": " + r.detail + "\n";
        }
        return 0;
    }
    throw PreconditionError("unknown family action '" + action + "'");
}

int run_toric(const std::string& link_file, const std::string& ideal_file, std::int64_t bound,
              Report& rep) {
    std::string text = read_input(link_file);
    if (!ideal_file.empty()) text += "\n" + read_input(ideal_file);
    toric::LinkFile lf = toric::parse_link_file(text);

    toric::ChamberDecomposition ch = toric::chambers(lf.T);
    json rays = json::array();
    rep.text += "rays (anticlockwise):\n";
    for (const auto& r : ch.rays) {
        json ray;
        ray["direction"] = {r.x, r.y};
        json vars = json::array();
        std::string names;
        for (std::size_t v : r.vars) {
            vars.push_back(lf.T.names[v]);
            names += (names.empty() ? "" : ",") + lf.T.names[v];
        }
        ray["vars"] = vars;
        rays.push_back(ray);
        rep.text += "  (" + std::to_string(r.x) + "," + std::to_string(r.y) + "): " + names + "\n";
    }
    rep.payload["rays"] = rays;
    rep.payload["movable"] = {ch.mov_lo, ch.mov_hi};

    auto steps = toric::walk_link(lf.T, bound);
    json jsteps = json::array();
    rep.text += "link:\n";
    for (const auto& st : steps) {
        json js;
        switch (st.kind) {
            case toric::LinkStep::Kind::DivisorialContraction: js["kind"] = "divisorial-contraction"; break;
            case toric::LinkStep::Kind::WallCrossing: js["kind"] = "wall-crossing"; break;
            case toric::LinkStep::Kind::Fibration: js["kind"] = "fibration"; break;
        }
        js["ray"] = st.ray_index;
        if (st.kind == toric::LinkStep::Kind::WallCrossing) {
            json sig = json::array();
            for (const auto& s : st.wall_signature) sig.push_back(s.to_string());
            js["signature"] = sig;
            js["signature_sum"] = st.signature_sum.to_string();
            js["label"] = st.label;
            rep.text += "  " + st.label + "\n";
        } else {
            js["generators"] = st.model.generators;
            js["degrees"] = st.model.degrees;
            js["target"] = st.model.target;
            js["label"] = st.label;
            std::string gens;
            for (const auto& g : st.model.generators) gens += (gens.empty() ? "" : ", ") + g;
            rep.text += "  " + st.label + " via [" + gens + "]\n";
        }
        jsteps.push_back(js);
    }
    rep.payload["steps"] = jsteps;

    if (!lf.gens.empty()) {
        toric::StrictTransform st = toric::strict_transform(lf.T, lf.gens);
        json jt = json::array();
        rep.text += "strict transforms:\n";
        for (std::size_t i = 0; i < st.gens.size(); ++i) {
            json jg;
            jg["order"] = st.orders[i];
            jg["gen"] = st.gens[i].render();
            jt.push_back(jg);
            rep.text += "  order " + std::to_string(st.orders[i]) + ": " + st.gens[i].render() +
                        "\n";
        }
        rep.payload["strict_transform"] = jt;

        json jwalls = json::array();
        for (std::size_t i = ch.mov_lo + 1; i < ch.mov_hi; ++i) {
            toric::WallRestriction wr = toric::restrict_wall(lf.T, st.gens, i);
            json jw;
            jw["ray"] = i;
            json eqs = json::array();
            for (const auto& e : wr.equations) eqs.push_back(e.render());
            jw["equations"] = eqs;
            jw["quotient_vars"] = wr.quotient_vars;
            jw["quotient_weights"] = wr.quotient_weights;
            if (wr.point_count) jw["point_count"] = *wr.point_count;
            if (wr.degenerate) jw["degenerate"] = true;
            if (!wr.note.empty()) jw["note"] = wr.note;
            jwalls.push_back(jw);
            rep.text += "wall " + std::to_string(i) + " restriction:";
            for (const auto& e : wr.equations) rep.text += " " + e.render() + ";";
            if (wr.point_count)
                rep.text += " " + std::to_string(*wr.point_count) + " distinct points";
            rep.text += "\n";
        }
        rep.payload["walls"] = jwalls;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact splitting-lemma, cA_n classification, sextic-double-solid family and "
                 "rank-2 toric 2-ray link computations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string format = "text";
    bool timing = false;
    int jobs = 1;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--timing", timing, "include timing in the report");
    app.add_option("--jobs", jobs, "parallelize independent sub-tasks");

    auto* split_cmd = app.add_subcommand("split", "splitting lemma series of a polynomial");
    std::string split_input = "-", split_vars, split_var, split_emit = "all";
    std::int64_t split_degree = 20;
    std::size_t term_limit = sds::kDefaultTermLimit;
    split_cmd->add_option("input", split_input, "input file or - for stdin");
    split_cmd->add_option("--vars", split_vars, "comma-separated variables (name[:weight])");
    split_cmd->add_option("--var", split_var, "split variable (default: first)");
    split_cmd->add_option("--degree", split_degree, "truncation degree");
    split_cmd->add_option("--emit", split_emit, "series to print")
        ->check(CLI::IsMember({"h", "g", "p", "v", "all"}));
    split_cmd->add_option("--term-limit", term_limit, "term-count resource guard");

    auto* classify_cmd = app.add_subcommand("classify", "classify a hypersurface germ");
    std::string cl_input = "-", cl_vars, cl_point;
    std::int64_t cl_bound = 20;
    classify_cmd->add_option("input", cl_input, "input file or - for stdin");
    classify_cmd->add_option("--vars", cl_vars, "comma-separated variables");
    classify_cmd->add_option("--point", cl_point, "base point coordinates p1,p2,...");
    classify_cmd->add_option("--degree-bound", cl_bound, "truncation degree");

    auto* family_cmd = app.add_subcommand("family", "sextic-double-solid families");
    std::string fam_action, fam_id = "all", fam_coeffs;
    family_cmd->add_option("action", fam_action, "construct | check | dims | generality")
        ->required()
        ->check(CLI::IsMember({"construct", "check", "dims", "generality"}));
    family_cmd->add_option("--family", fam_id, "family id n or 7.sub (or 'all' for dims)");
    family_cmd->add_option("coefficients", fam_coeffs, "coefficient file");

    auto* toric_cmd = app.add_subcommand("toric-link", "walk a rank-2 toric 2-ray link");
    std::string link_file, ideal_file;
    std::int64_t bound = 24;
    toric_cmd->add_option("link", link_file, "link-definition file")->required();
    toric_cmd->add_option("ideal", ideal_file, "extra ideal-generator file");
    toric_cmd->add_option("--bound", bound, "monomial search exponent bound");

    CLI11_PARSE(app, argc, argv);

    std::string command, digest_src;
    Report rep;
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (split_cmd->parsed()) {
            command = "split";
            std::string text = read_input(split_input);
            digest_src = text + "|" + split_vars + "|" + split_var + "|" +
                         std::to_string(split_degree) + "|" + split_emit;
            run_split(text, split_vars, split_var, split_degree, split_emit, term_limit, rep);
        } else if (classify_cmd->parsed()) {
            command = "classify";
            std::string text = read_input(cl_input);
            digest_src = text + "|" + cl_vars + "|" + cl_point + "|" + std::to_string(cl_bound);
            run_classify(text, cl_vars, cl_point, cl_bound, rep);
        } else if (family_cmd->parsed()) {
            command = "family";
            digest_src = fam_action + "|" + fam_id + "|" + fam_coeffs;
            run_family(fam_action, fam_id, fam_coeffs, jobs, rep);
        } else if (toric_cmd->parsed()) {
            command = "toric-link";
            digest_src = link_file + "|" + ideal_file + "|" + std::to_string(bound);
            run_toric(link_file, ideal_file, bound, rep);
        }
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const InternalCheckError& e) {
        std::cerr << "internal identity failure: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    emit(command, fnv1a(digest_src), rep, format, timing, ms);
    return 0;
}
