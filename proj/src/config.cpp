#include "subcurv/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace subcurv {

namespace {

using nlohmann::ordered_json;

const std::set<std::string> kTheoremIds = {"thm31",      "thm32",     "thm41",
                                           "rsf_thm36",  "csf_thm38", "gssf_thm310",
                                           "rsf_thm43",  "csf_thm45", "gssf_thm47"};

[[noreturn]] void missing(const std::string& what) {
    throw MissingField("config is missing '" + what + "'");
}

// "i,j" (1-based) -> pair; malformed keys are syntax errors.
std::pair<int, int> entry_key(const std::string& key) {
    size_t comma = key.find(',');
    if (comma == std::string::npos) throw SyntaxError("metric key '" + key + "' is not 'i,j'");
    try {
        int i = std::stoi(key.substr(0, comma));
        int j = std::stoi(key.substr(comma + 1));
        return {i, j};
    } catch (const std::exception&) {
        throw SyntaxError("metric key '" + key + "' is not 'i,j'");
    }
}

std::vector<std::vector<std::string>> read_matrix(const ordered_json& jm, int dim,
                                                  const std::string& label, bool symmetric) {
    if (!jm.is_object()) throw SyntaxError(label + " must be an object of 'i,j' entries");
    std::vector<std::vector<std::string>> mat(static_cast<size_t>(dim),
                                              std::vector<std::string>(static_cast<size_t>(dim), "0"));
    for (const auto& [key, val] : jm.items()) {
        auto [i, j] = entry_key(key);
        if (i < 1 || j < 1 || i > dim || j > dim)
            throw ShapeError(label + " entry " + key + " is outside the " +
                             std::to_string(dim) + "-dimensional chart");
        if (symmetric && i > j)
            throw ShapeError(label + " entry " + key + " is below the diagonal; "
                             "specify the upper triangle");
        if (!val.is_string()) throw SyntaxError(label + " entry " + key + " must be a string");
        mat[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] = val.get<std::string>();
        if (symmetric) mat[static_cast<size_t>(j - 1)][static_cast<size_t>(i - 1)] = val.get<std::string>();
    }
    if (symmetric)
        for (int d = 0; d < dim; ++d)
            if (!jm.contains(std::to_string(d + 1) + "," + std::to_string(d + 1)))
                throw MissingField(label + " is missing diagonal entry " +
                                   std::to_string(d + 1) + "," + std::to_string(d + 1));
    return mat;
}

std::vector<std::string> read_string_array(const ordered_json& ja, const std::string& label) {
    if (!ja.is_array()) throw SyntaxError(label + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : ja) {
        if (!v.is_string()) throw SyntaxError(label + " entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::string strip_ws(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

void check_expressions(const std::vector<std::vector<std::string>>& mat) {
    for (const auto& row : mat)
        for (const auto& e : row) Expression::parse(e);
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

RunConfig load_config_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw SyntaxError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    if (j.contains("name")) cfg.name = j["name"].get<std::string>();
    if (!j.contains("dimensions")) missing("dimensions");
    const auto& dims = j["dimensions"];
    if (!dims.contains("n") || !dims.contains("m")) missing("dimensions.n / dimensions.m");
    cfg.n = dims["n"].get<int>();
    cfg.m = dims["m"].get<int>();
    if (cfg.n < 1 || cfg.m < 1 || cfg.m > cfg.n)
        throw ShapeError("dimensions must satisfy 1 <= m <= n");

    if (!j.contains("metric_total")) missing("metric_total");
    if (!j.contains("metric_base")) missing("metric_base");
    cfg.g1 = read_matrix(j["metric_total"], cfg.n, "metric_total", true);
    cfg.g2 = read_matrix(j["metric_base"], cfg.m, "metric_base", true);
    check_expressions(cfg.g1);
    check_expressions(cfg.g2);

    if (!j.contains("map")) missing("map");
    cfg.map = read_string_array(j["map"], "map");
    if (static_cast<int>(cfg.map.size()) != cfg.m)
        throw ShapeError("map needs exactly m = " + std::to_string(cfg.m) + " components");
    for (const auto& c : cfg.map) Expression::parse(c);

    if (j.contains("structure") && !j["structure"].is_null()) {
        const auto& js = j["structure"];
        StructureConfig sc;
        if (!js.contains("kind")) missing("structure.kind");
        std::string kind = js["kind"].get<std::string>();
        if (kind == "complex")
            sc.kind = StructureKind::Complex;
        else if (kind == "almost-contact")
            sc.kind = StructureKind::AlmostContact;
        else
            throw SyntaxError("structure.kind must be 'complex' or 'almost-contact'");
        const char* jkey = js.contains("J") ? "J" : "phi";
        if (!js.contains(jkey)) missing("structure.J");
        sc.J = read_matrix(js[jkey], cfg.n, "structure tensor", false);
        check_expressions(sc.J);
        if (sc.kind == StructureKind::AlmostContact) {
            if (!js.contains("xi") || !js.contains("eta")) missing("structure.xi / structure.eta");
            sc.xi = read_string_array(js["xi"], "structure.xi");
            sc.eta = read_string_array(js["eta"], "structure.eta");
            if (static_cast<int>(sc.xi.size()) != cfg.n ||
                static_cast<int>(sc.eta.size()) != cfg.n)
                throw ShapeError("structure.xi and structure.eta need n entries");
            for (const auto& e : sc.xi) Expression::parse(e);
            for (const auto& e : sc.eta) Expression::parse(e);
        }
        cfg.structure = std::move(sc);
    }

    if (j.contains("model") && !j["model"].is_null()) {
        const auto& jm = j["model"];
        ModelConfig mc;
        if (!jm.contains("family")) missing("model.family");
        mc.family = jm["family"].get<std::string>();
        if (jm.contains("c")) mc.c = jm["c"].get<double>();
        if (jm.contains("c1")) mc.c1 = jm["c1"].get<double>();
        if (jm.contains("c2")) mc.c2 = jm["c2"].get<double>();
        if (jm.contains("c3")) mc.c3 = jm["c3"].get<double>();
        if (jm.contains("alpha")) mc.alpha = jm["alpha"].get<double>();
        cfg.model = std::move(mc);
        model_from(cfg);  // validates the family name
    }

    if (!j.contains("points")) missing("points");
    if (!j["points"].is_array() || j["points"].empty())
        throw ShapeError("points must be a non-empty array");
    for (const auto& jp : j["points"]) {
        if (!jp.is_array() || static_cast<int>(jp.size()) != cfg.n)
            throw ShapeError("each point needs n = " + std::to_string(cfg.n) + " coordinates");
        Point p(cfg.n);
        for (int i = 0; i < cfg.n; ++i) p(i) = jp[static_cast<size_t>(i)].get<double>();
        cfg.points.push_back(std::move(p));
    }

    if (j.contains("planes")) {
        const auto& jp = j["planes"];
        auto read_pair = [&](const char* key, int limit, int& a, int& b) {
            if (!jp.contains(key)) return;
            const auto& arr = jp[key];
            if (!arr.is_array() || arr.size() != 2)
                throw ShapeError(std::string("planes.") + key + " must hold two frame indices");
            a = arr[0].get<int>();
            b = arr[1].get<int>();
            if (a < 1 || b < 1 || a > limit || b > limit || a == b)
                throw ShapeError(std::string("planes.") + key + " indices are out of range");
        };
        read_pair("vertical", cfg.n - cfg.m, cfg.pi_v1, cfg.pi_v2);
        read_pair("horizontal", cfg.m, cfg.pp_h1, cfg.pp_h2);
    }

    if (j.contains("theorems")) {
        cfg.theorems = read_string_array(j["theorems"], "theorems");
        for (const auto& id : cfg.theorems)
            if (!kTheoremIds.count(id)) throw SyntaxError("unknown theorem id '" + id + "'");
    }

    if (j.contains("tolerances")) {
        const auto& jt = j["tolerances"];
        if (jt.contains("gap_tol")) cfg.tols.gap_tol = jt["gap_tol"].get<double>();
        if (jt.contains("eq_tol")) cfg.tols.eq_tol = jt["eq_tol"].get<double>();
        if (jt.contains("xcheck_tol")) cfg.tols.xcheck_tol = jt["xcheck_tol"].get<double>();
        if (jt.contains("align_tol")) cfg.tols.align_tol = jt["align_tol"].get<double>();
        if (jt.contains("fit_tol")) cfg.tols.fit_tol = jt["fit_tol"].get<double>();
        if (jt.contains("struct_tol")) cfg.struct_tol = jt["struct_tol"].get<double>();
    }

    if (j.contains("output")) {
        const auto& jo = j["output"];
        if (jo.contains("path")) cfg.out_path = jo["path"].get<std::string>();
        if (jo.contains("format")) {
            cfg.out_format = jo["format"].get<std::string>();
            if (cfg.out_format != "json" && cfg.out_format != "csv")
                throw SyntaxError("output.format must be 'json' or 'csv'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str());
}

std::string config_canonical(const RunConfig& cfg) {
    ordered_json j;
    j["name"] = cfg.name;
    j["dimensions"] = {{"n", cfg.n}, {"m", cfg.m}};
    auto matrix_json = [](const std::vector<std::vector<std::string>>& mat) {
        ordered_json out = ordered_json::object();
        for (size_t i = 0; i < mat.size(); ++i)
            for (size_t ji = 0; ji < mat.size(); ++ji) {
                std::string e = strip_ws(mat[i][ji]);
                if (e != "0")
                    out[std::to_string(i + 1) + "," + std::to_string(ji + 1)] = e;
            }
        return out;
    };
    j["metric_total"] = matrix_json(cfg.g1);
    j["metric_base"] = matrix_json(cfg.g2);
    ordered_json jmap = ordered_json::array();
    for (const auto& c : cfg.map) jmap.push_back(strip_ws(c));
    j["map"] = jmap;
    if (cfg.structure) {
        ordered_json js;
        js["kind"] = cfg.structure->kind == StructureKind::Complex ? "complex" : "almost-contact";
        js["J"] = matrix_json(cfg.structure->J);
        ordered_json jxi = ordered_json::array(), jeta = ordered_json::array();
        for (const auto& e : cfg.structure->xi) jxi.push_back(strip_ws(e));
        for (const auto& e : cfg.structure->eta) jeta.push_back(strip_ws(e));
        js["xi"] = jxi;
        js["eta"] = jeta;
        j["structure"] = js;
    }
    if (cfg.model) {
        j["model"] = {{"family", cfg.model->family}, {"c", cfg.model->c},
                      {"c1", cfg.model->c1},         {"c2", cfg.model->c2},
                      {"c3", cfg.model->c3},         {"alpha", cfg.model->alpha}};
    }
    ordered_json jpts = ordered_json::array();
    for (const auto& p : cfg.points) {
        ordered_json jp = ordered_json::array();
        for (int i = 0; i < p.size(); ++i) jp.push_back(p(i));
        jpts.push_back(jp);
    }
    j["points"] = jpts;
    j["planes"] = {{"vertical", {cfg.pi_v1, cfg.pi_v2}},
                   {"horizontal", {cfg.pp_h1, cfg.pp_h2}}};
    j["theorems"] = cfg.theorems;
    j["tolerances"] = {{"gap_tol", cfg.tols.gap_tol},     {"eq_tol", cfg.tols.eq_tol},
                       {"xcheck_tol", cfg.tols.xcheck_tol}, {"align_tol", cfg.tols.align_tol},
                       {"fit_tol", cfg.tols.fit_tol},      {"struct_tol", cfg.struct_tol}};
    return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx",
             static_cast<unsigned long long>(fnv1a(config_canonical(cfg))));
    return buf;
}

SubmersionSetup setup_from(const RunConfig& cfg) {
    MetricField g1 = MetricField::parse(cfg.g1, DerivMode::Analytic);
    MetricField g2 = MetricField::parse(cfg.g2, DerivMode::Analytic);
    SmoothMap map = SmoothMap::parse(cfg.n, cfg.map, DerivMode::Analytic);
    std::shared_ptr<const StructureTensors> st;
    if (cfg.structure)
        st = std::make_shared<StructureTensors>(StructureTensors::parse(
            cfg.structure->kind, cfg.n, cfg.structure->J, cfg.structure->xi, cfg.structure->eta));
    return SubmersionSetup(std::move(g1), std::move(g2), std::move(map), std::move(st));
}

std::optional<SpaceFormModel> model_from(const RunConfig& cfg) {
    if (!cfg.model) return std::nullopt;
    const ModelConfig& mc = *cfg.model;
    if (mc.family == "real") return SpaceFormModel::real(mc.c);
    if (mc.family == "complex") return SpaceFormModel::complex_form(mc.c);
    if (mc.family == "generalized-sasakian")
        return SpaceFormModel::generalized_sasakian(mc.c1, mc.c2, mc.c3);
    if (mc.family == "sasakian") return SpaceFormModel::sasakian(mc.c);
    if (mc.family == "kenmotsu") return SpaceFormModel::kenmotsu(mc.c);
    if (mc.family == "cosymplectic") return SpaceFormModel::cosymplectic(mc.c);
    if (mc.family == "c-alpha") return SpaceFormModel::c_alpha(mc.c, mc.alpha);
    throw SyntaxError("unknown model family '" + mc.family + "'");
}

}  // namespace subcurv
