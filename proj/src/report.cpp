#include "subcurv/report.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace subcurv {

namespace {

using nlohmann::ordered_json;

bool is_model_theorem(const std::string& id) {
    return id.rfind("rsf_", 0) == 0 || id.rfind("csf_", 0) == 0 || id.rfind("gssf_", 0) == 0;
}

// Family compatibility between a theorem id and the declared model.
bool family_matches(const std::string& id, const SpaceFormModel& model) {
    if (id.rfind("rsf_", 0) == 0) return model.family == ModelFamily::Real;
    if (id.rfind("csf_", 0) == 0) return model.family == ModelFamily::Complex;
    if (id.rfind("gssf_", 0) == 0) return model.contact_family();
    return true;
}

std::string fmt17(double v) {
    char buf[40];
    snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json report_json(const RunResult& rr) {
    const InequalityReport& rep = rr.report;
    ordered_json j;
    j["point_index"] = rr.point_index;
    j["theorem"] = rep.theorem;
    ordered_json jp = ordered_json::array();
    for (int i = 0; i < rep.point.size(); ++i) jp.push_back(rep.point(i));
    j["point"] = jp;
    ordered_json planes = ordered_json::array();
    for (const auto& v : rep.plane_vectors) {
        ordered_json jv = ordered_json::array();
        for (int i = 0; i < v.size(); ++i) jv.push_back(v(i));
        planes.push_back(jv);
    }
    j["plane_vectors"] = planes;
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["gap"] = rep.gap;
    j["holds"] = rep.holds;
    j["equality"] = rep.equality;
    ordered_json conds = ordered_json::array();
    for (const auto& c : rep.conditions)
        conds.push_back({{"label", c.label}, {"residual", c.residual}, {"pass", c.pass}});
    j["equality_conditions"] = conds;
    ordered_json terms = ordered_json::object();
    for (const auto& [k, v] : rep.terms) terms[k] = v;
    j["terms"] = terms;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

}  // namespace

RunReport run_verify(const RunConfig& cfg, int point_filter,
                     const std::vector<std::string>& theorem_filter) {
    RunReport out;
    out.config_hash = config_hash(cfg);
    SubmersionSetup setup = setup_from(cfg);
    std::optional<SpaceFormModel> model = model_from(cfg);

    std::vector<std::string> ids = cfg.theorems;
    if (!theorem_filter.empty()) {
        std::vector<std::string> kept;
        for (const auto& id : ids)
            if (std::find(theorem_filter.begin(), theorem_filter.end(), id) !=
                theorem_filter.end())
                kept.push_back(id);
        ids = kept;
    }

    bool structure_ok = true;
    if (cfg.structure) {
        try {
            StructureReport srep = validate_structure(setup, cfg.points, cfg.struct_tol);
            structure_ok = srep.pass;
            out.validations.push_back({-1, "structure", srep.max_residual, srep.pass, ""});
        } catch (const Error& e) {
            structure_ok = false;
            out.validations.push_back({-1, "structure", 0, false, e.what()});
        }
    }
    bool fit_ok = true;
    double fit_residual = 0;
    if (model) {
        try {
            ModelFitReport fit = model_fit(setup, cfg.points, *model);
            fit_ok = cfg.tols.fit_tol > 0 ? fit.residual < cfg.tols.fit_tol : fit.pass;
            fit_residual = fit.residual;
            out.validations.push_back({-1, "model_fit", fit.residual, fit_ok, ""});
        } catch (const Error& e) {
            fit_ok = false;
            out.validations.push_back({-1, "model_fit", 0, false, e.what()});
        }
    }

    for (int idx = 0; idx < static_cast<int>(cfg.points.size()); ++idx) {
        if (point_filter >= 0 && idx != point_filter) continue;
        const Point& p = cfg.points[static_cast<size_t>(idx)];

        try {
            SubmersionReport sub = validate_submersion(setup, {p});
            const auto& pc = sub.points.at(0);
            out.validations.push_back({idx, "submersion", pc.residual, pc.ok, pc.note});
        } catch (const Error& e) {
            out.validations.push_back({idx, "submersion", 0, false, e.what()});
        }

        for (const auto& id : ids) {
            if (is_model_theorem(id)) {
                if (!model) {
                    out.errors.push_back({idx, id, "theorem needs a space form model"});
                    continue;
                }
                if (!family_matches(id, *model)) {
                    out.errors.push_back({idx, id, "model family does not match the theorem"});
                    continue;
                }
                if (!structure_ok || !fit_ok) {
                    out.errors.push_back(
                        {idx, id,
                         !fit_ok ? "model misfit: residual " + fmt17(fit_residual)
                                 : "structure axioms fail validation"});
                    continue;
                }
            }
            try {
                FramePair fr = build_frames(setup, p);
                Plane2 pi{PlaneSpace::Vertical, fr.vertical.col(cfg.pi_v1 - 1),
                          fr.vertical.col(cfg.pi_v2 - 1)};
                const SpaceFormModel* mp =
                    is_model_theorem(id) && model ? &model.value() : nullptr;
                InequalityReport rep;
                if (id == "thm31" || id == "rsf_thm36" || id == "csf_thm38" ||
                    id == "gssf_thm310") {
                    rep = check_vertical(setup, p, pi, mp, cfg.tols);
                } else if (id == "thm32") {
                    rep = check_delta_hat(setup, p, mp, cfg.tols);
                } else {
                    Plane2 pp{PlaneSpace::Horizontal, fr.horizontal.col(cfg.pp_h1 - 1),
                              fr.horizontal.col(cfg.pp_h2 - 1)};
                    rep = check_horizontal_vertical(setup, p, pi, pp, mp, cfg.tols);
                }
                out.results.push_back({idx, std::move(rep)});
            } catch (const Error& e) {
                out.errors.push_back({idx, id, e.what()});
            }
        }
    }
    return out;
}

std::string emit_json(const RunConfig& cfg, const RunReport& rep) {
    ordered_json j;
    j["config_hash"] = rep.config_hash;
    j["config"] = ordered_json::parse(config_canonical(cfg));
    ordered_json vals = ordered_json::array();
    for (const auto& v : rep.validations)
        vals.push_back({{"point_index", v.point_index},
                        {"check", v.check},
                        {"residual", v.residual},
                        {"ok", v.ok},
                        {"note", v.note}});
    j["validations"] = vals;
    ordered_json results = ordered_json::array();
    for (const auto& rr : rep.results) results.push_back(report_json(rr));
    j["results"] = results;
    ordered_json errs = ordered_json::array();
    for (const auto& e : rep.errors)
        errs.push_back({{"point_index", e.point_index},
                        {"theorem", e.theorem},
                        {"message", e.message}});
    j["errors"] = errs;
    return j.dump(2) + "\n";
}

std::string emit_csv(const RunReport& rep) {
    std::string out =
        "point_index,theorem,lhs,rhs,gap,holds,equality,worst_equality_residual\n";
    for (const auto& rr : rep.results) {
        const InequalityReport& r = rr.report;
        out += std::to_string(rr.point_index) + "," + r.theorem + "," + fmt17(r.lhs) + "," +
               fmt17(r.rhs) + "," + fmt17(r.gap) + "," + (r.holds ? "true" : "false") + "," +
               (r.equality ? "true" : "false") + "," + fmt17(r.worst_condition_residual()) +
               "\n";
    }
    return out;
}

void write_report(const RunConfig& cfg, const RunReport& rep, const std::string& path,
                  const std::string& format) {
    if (format != "json" && format != "csv")
        throw SyntaxError("report format must be 'json' or 'csv'");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report to '" + path + "'");
    out << (format == "csv" ? emit_csv(rep) : emit_json(cfg, rep));
}

int exit_code(const RunReport& rep) {
    for (const auto& rr : rep.results)
        if (!rr.report.holds) return 2;
    if (!rep.errors.empty()) return 1;
    return 0;
}

}  // namespace subcurv
