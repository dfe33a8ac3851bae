#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subcurv/catalog.hpp"
#include "subcurv/report.hpp"

namespace {

void print_report(const subcurv::RunReport& rep) {
    for (const auto& v : rep.validations) {
        std::string where =
            v.point_index < 0 ? "run" : "point " + std::to_string(v.point_index);
        std::printf("  [%s] %-10s %-8s residual=%.3e%s%s\n", v.ok ? "ok " : "WARN",
                    v.check.c_str(), where.c_str(), v.residual,
                    v.note.empty() ? "" : " ", v.note.c_str());
    }
    for (const auto& r : rep.results) {
        const auto& ir = r.report;
        std::printf("  [%s] %-11s point %d  lhs=%.9g  rhs=%.9g  gap=%.3e%s\n",
                    ir.holds ? "PASS" : "FAIL", ir.theorem.c_str(), r.point_index,
                    ir.lhs, ir.rhs, ir.gap, ir.equality ? "  (equality)" : "");
        if (ir.equality)
            for (const auto& c : ir.conditions)
                std::printf("          %s %s (residual %.3e)\n",
                            c.pass ? "=" : "x", c.label.c_str(), c.residual);
    }
    for (const auto& e : rep.errors)
        std::printf("  [ERR ] %-11s point %d  %s\n", e.theorem.c_str(),
                    e.point_index, e.message.c_str());
}

int run_and_emit(subcurv::RunConfig cfg, int point, std::vector<std::string> theorems,
                 const std::string& out, const std::string& format) {
    if (!out.empty()) cfg.out_path = out;
    if (!format.empty()) cfg.out_format = format;
    subcurv::RunReport rep = subcurv::run_verify(cfg, point, theorems);
    std::printf("%s  (config %s)\n", cfg.name.empty() ? "run" : cfg.name.c_str(),
                rep.config_hash.c_str());
    print_report(rep);
    if (!cfg.out_path.empty()) {
        subcurv::write_report(cfg, rep, cfg.out_path, cfg.out_format);
        std::printf("report written to %s (%s)\n", cfg.out_path.c_str(),
                    cfg.out_format.c_str());
    }
    return subcurv::exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riemannian submersion curvature-inequality verifier"};
    app.require_subcommand(1);

    std::string config_path, out_path, format, entry_name, a_csv;
    int point = -1, lemma_k = 0;
    std::vector<std::string> theorems;

    CLI::App* verify = app.add_subcommand("verify", "run the checks in a config file");
    verify->add_option("--config", config_path, "config file (JSON)")->required();
    verify->add_option("--point", point, "restrict to one point index");
    verify->add_option("--theorem", theorems, "restrict to these theorem ids");
    verify->add_option("--out", out_path, "report file path");
    verify->add_option("--format", format, "report format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* catalog = app.add_subcommand("catalog", "built-in examples");
    catalog->require_subcommand(1);
    catalog->add_subcommand("list", "list the built-in examples");
    CLI::App* run = catalog->add_subcommand("run", "run a built-in example");
    run->add_option("name", entry_name, "catalog entry name")->required();
    run->add_option("--point", point, "restrict to one point index");
    run->add_option("--theorem", theorems, "restrict to these theorem ids");
    run->add_option("--out", out_path, "report file path");
    run->add_option("--format", format, "report format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* lemma = app.add_subcommand(
        "lemma", "evaluate the algebraic lemma gap 2 a1 a2 - b");
    lemma->add_option("--k", lemma_k, "number of terms")->required();
    lemma->add_option("--a", a_csv, "comma-separated a1,..,aK")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed())
            return run_and_emit(subcurv::load_config(config_path), point, theorems,
                                out_path, format);

        if (catalog->parsed()) {
            if (catalog->get_subcommand("list")->parsed()) {
                for (const auto& e : subcurv::catalog())
                    std::printf("%-22s %s\n", e.name.c_str(), e.summary.c_str());
                return 0;
            }
            return run_and_emit(subcurv::catalog_entry(entry_name).config, point,
                                theorems, out_path, format);
        }

        // lemma: b is determined by (sum a)^2 = (k-1)(sum a^2 + b).
        if (lemma_k <= 2)
            throw subcurv::ConstraintViolated("the lemma needs k > 2");
        std::vector<double> vals;
        std::stringstream ss(a_csv);
        for (std::string tok; std::getline(ss, tok, ',');)
            vals.push_back(std::stod(tok));
        if (static_cast<int>(vals.size()) != lemma_k)
            throw subcurv::ShapeError("--a expects exactly " +
                                      std::to_string(lemma_k) + " values");
        subcurv::LemmaInstance inst;
        inst.k = lemma_k;
        inst.a = Eigen::Map<const Eigen::VectorXd>(vals.data(), lemma_k);
        inst.b = inst.a.sum() * inst.a.sum() / (lemma_k - 1) - inst.a.squaredNorm();
        subcurv::LemmaResult res = subcurv::chen_lemma_gap(inst);
        std::printf("b = %.17g\ngap = %.17g\ncondition residual = %.17g\n%s\n",
                    inst.b, res.gap, res.condition_residual,
                    res.equality ? "equality case" : "strict");
        return res.gap < -subcurv::tol::lemma ? 2 : 0;
    } catch (const subcurv::Error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}
