#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "canlink/binforms.hpp"
#include "canlink/poly.hpp"
#include "canlink/sds.hpp"
#include "canlink/singularity.hpp"
#include "canlink/splitting.hpp"
#include "canlink/toric.hpp"

namespace py = pybind11;
using namespace canlink;

namespace {

py::dict split_py(const std::string& text, const std::vector<std::string>& names,
                  const std::string& var, std::int64_t degree) {
    TablePtr table = VarTable::make(names);
    Poly f = parse_poly(text, table);
    SplitRequest req{f, table->index_of(var), degree, {}};
    SplitSeries s = split(req);
    py::dict out;
    out["g"] = s.g.render();
    out["h"] = s.h.render();
    out["p"] = s.p.render();
    out["v"] = s.v.render();
    out["verified"] = verify_split(f, table->index_of(var), s);
    return out;
}

std::string iterated_split_py(const std::string& text, const std::vector<std::string>& names,
                              const std::vector<std::string>& split_vars, std::int64_t degree) {
    TablePtr table = VarTable::make(names);
    Poly f = parse_poly(text, table);
    std::vector<std::size_t> vars;
    for (const auto& v : split_vars) vars.push_back(table->index_of(v));
    return iterated_split(f, vars, degree).render();
}

py::dict classify_py(const std::string& text, const std::vector<std::string>& names,
                     const std::vector<std::string>& point, std::int64_t bound) {
    TablePtr table = VarTable::make(names);
    GermPresentation germ{parse_poly(text, table), {}, bound};
    for (const auto& c : point) germ.base_point.push_back(Rat::from_string(c));
    GermReport r = classify_cAn(germ);
    py::dict out;
    out["quad_rank"] = r.quad_rank;
    switch (r.kind) {
        case GermKind::Smooth: out["kind"] = "smooth"; break;
        case GermKind::NotCA: out["kind"] = "not_cA"; break;
        case GermKind::Index: out["kind"] = "index"; break;
        case GermKind::IndexAtLeast: out["kind"] = "index_at_least"; break;
    }
    if (r.kind == GermKind::Index || r.kind == GermKind::IndexAtLeast) {
        out["index"] = r.index;
        out["residual"] = r.residual_h.render();
    }
    return out;
}

int family_dim_py(const std::string& family) {
    return sds::param_dim(sds::parse_family(family));
}

std::string family_residual_py(const std::string& family, std::int64_t k) {
    return sds::residual_h(sds::parse_family(family), k, true).render();
}

py::dict family_check_py(const std::string& family, const std::string& coeff_text) {
    sds::ConditionReport rep =
        sds::check_membership(sds::parse_family_file(coeff_text), sds::parse_family(family));
    py::dict out;
    py::list checks;
    for (const auto& c : rep.checks) {
        py::dict item;
        item["condition"] = c.id;
        item["pass"] = c.pass;
        item["witness"] = c.witness;
        checks.append(item);
    }
    out["checks"] = checks;
    out["member"] = rep.member;
    out["verdict"] = rep.verdict;
    out["residual"] = rep.residual.render();
    return out;
}

py::dict family_generality_py(const std::string& family, const std::string& coeff_text) {
    sds::GeneralityReport rep =
        sds::check_generality(sds::parse_family(family), sds::parse_family_file(coeff_text));
    py::dict out;
    out["pass"] = rep.pass;
    out["detail"] = rep.detail;
    if (rep.count) out["count"] = *rep.count;
    return out;
}

py::list walk_link_py(const std::string& link_text) {
    toric::LinkFile lf = toric::parse_link_file(link_text);
    py::list out;
    for (const auto& st : toric::walk_link(lf.T)) {
        py::dict d;
        switch (st.kind) {
            case toric::LinkStep::Kind::DivisorialContraction:
                d["kind"] = "divisorial-contraction";
                break;
            case toric::LinkStep::Kind::WallCrossing: d["kind"] = "wall-crossing"; break;
            case toric::LinkStep::Kind::Fibration: d["kind"] = "fibration"; break;
        }
        d["label"] = st.label;
        if (st.kind == toric::LinkStep::Kind::WallCrossing) {
            py::list sig;
            for (const auto& s : st.wall_signature) sig.append(s.to_string());
            d["signature"] = sig;
        } else {
            d["generators"] = st.model.generators;
            d["target"] = st.model.target;
        }
        out.append(d);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(canlink, m) {
    m.doc() = "exact splitting-lemma, cA_n classification and toric 2-ray link computations";

    py::register_exception<ResourceLimitError>(m, "ResourceLimitError");
    py::register_exception<Error>(m, "CanlinkError");

    m.def("split", &split_py, py::arg("polynomial"), py::arg("variables"), py::arg("split_var"),
          py::arg("degree"), "splitting-lemma series g, h, p, v truncated at the given degree");
    m.def("iterated_split", &iterated_split_py, py::arg("polynomial"), py::arg("variables"),
          py::arg("split_vars"), py::arg("degree"), "residual after splitting in each variable");
    m.def("classify", &classify_py, py::arg("polynomial"), py::arg("variables"),
          py::arg("point") = std::vector<std::string>{}, py::arg("degree_bound") = 20,
          "classify a hypersurface germ as cA_n");
    m.def("family_dim", &family_dim_py, py::arg("family"),
          "parameter-space dimension of a sextic-double-solid family");
    m.def("family_residual", &family_residual_py, py::arg("family"), py::arg("k"),
          "symbolic residual h_k after the family's conditions");
    m.def("family_check", &family_check_py, py::arg("family"), py::arg("coefficients"),
          "condition-by-condition membership check of a coefficient file");
    m.def("family_generality", &family_generality_py, py::arg("family"), py::arg("coefficients"),
          "per-family generality (point-count/coprimality) verdict");
    m.def("walk_link", &walk_link_py, py::arg("link_text"),
          "walk the 2-ray link of a rank-2 toric variety given in link-file syntax");
    m.def("render_roundtrip", [](const std::string& text, const std::vector<std::string>& names) {
        return parse_poly(text, VarTable::make(names)).render();
    });
}
