// Command-line front end; everything goes through the C interface.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pnsfem.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_solver = 2;
constexpr int exit_config = 3;

int status_to_exit(int status) {
  if (status == PNSFEM_OK) return exit_ok;
  if (status == PNSFEM_ERR_CONFIG || status == PNSFEM_ERR_ARG) return exit_config;
  return exit_solver;
}

int fail(int status) {
  std::fprintf(stderr, "error: %s\n", pnsfem_last_error());
  return status_to_exit(status);
}

struct Options {
  std::string config_path;
  std::string family;
  std::string error_variant;
  std::string out_dir;
  int level = 0;  // 0: keep the config's value
};

void add_common_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "configuration file");
  cmd->add_option("--level", opt.level, "mesh level n (base mesh refined n-1 times)");
  cmd->add_option("--family", opt.family, "element family: mini, taylor_hood, crouzeix_raviart");
  cmd->add_option("--error-variant", opt.error_variant, "e_F accumulation: squared, as_written");
  cmd->add_option("--out", opt.out_dir, "output directory");
}

// Loads the config (experiment defaults when no file is given) and applies
// the command-line overrides.  Returns a status code; *out is null on failure.
int load_config(const Options& opt, pnsfem_config** out) {
  int status = opt.config_path.empty() ? pnsfem_config_create("singular", out)
                                       : pnsfem_config_read(opt.config_path.c_str(), out);
  if (status != PNSFEM_OK) return status;
  auto set = [&](const char* key, const std::string& value) {
    if (status == PNSFEM_OK && !value.empty())
      status = pnsfem_config_set(*out, key, value.c_str());
  };
  set("experiment.family", opt.family);
  set("experiment.error_variant", opt.error_variant);
  set("output.dir", opt.out_dir);
  if (status == PNSFEM_OK && opt.level > 0)
    status = pnsfem_config_set(*out, "mesh.level", std::to_string(opt.level).c_str());
  if (status != PNSFEM_OK) {
    pnsfem_config_destroy(*out);
    *out = nullptr;
  }
  return status;
}

int cmd_mesh(const Options& opt, const std::string& write_path) {
  pnsfem_config* cfg = nullptr;
  int status = load_config(opt, &cfg);
  if (status != PNSFEM_OK) return fail(status);

  auto num = [&](const char* key) {
    char buf[64] = {0};
    pnsfem_config_get(cfg, key, buf, sizeof buf);
    return std::stod(buf);
  };
  const double x0 = num("domain.x0"), y0 = num("domain.y0");
  const double x1 = num("domain.x1"), y1 = num("domain.y1");
  const int nx = static_cast<int>(num("mesh.nx")), ny = static_cast<int>(num("mesh.ny"));
  const int level = static_cast<int>(num("mesh.level"));
  pnsfem_config_destroy(cfg);

  pnsfem_mesh* mesh = nullptr;
  status = pnsfem_mesh_create_rectangle(x0, y0, x1, y1, nx, ny, &mesh);
  for (int l = 1; l < level && status == PNSFEM_OK; ++l) {
    pnsfem_mesh* fine = nullptr;
    status = pnsfem_mesh_refine(mesh, &fine);
    pnsfem_mesh_destroy(mesh);
    mesh = fine;
  }
  if (status != PNSFEM_OK) return fail(status);

  int nv = 0, nc = 0, defects = 0;
  double h = 0.0;
  char defect_text[1024] = {0};
  pnsfem_mesh_stats(mesh, &nv, &nc, &h);
  pnsfem_mesh_validate(mesh, &defects, defect_text, sizeof defect_text);
  std::printf("level %d: %d vertices, %d cells, h_max %.6e, %d defects\n", level, nv, nc, h,
              defects);
  if (defects > 0) std::printf("%s\n", defect_text);
  if (!write_path.empty() && status == PNSFEM_OK)
    status = pnsfem_mesh_write(mesh, write_path.c_str());
  pnsfem_mesh_destroy(mesh);
  if (status != PNSFEM_OK) return fail(status);
  return defects == 0 ? exit_ok : exit_solver;
}

int cmd_solve(const Options& opt) {
  pnsfem_config* cfg = nullptr;
  int status = load_config(opt, &cfg);
  if (status != PNSFEM_OK) return fail(status);

  pnsfem_run_summary summary = {};
  status = pnsfem_run_experiment(cfg, &summary);
  char out_dir[512] = {0};
  pnsfem_config_get(cfg, "output.dir", out_dir, sizeof out_dir);
  pnsfem_config_destroy(cfg);
  if (status != PNSFEM_OK) return fail(status);

  std::printf("completed %d steps, h_max %.6e, final kinetic energy %.6e\n", summary.steps,
              summary.h_max, summary.kinetic_final);
  if (summary.has_errors)
    std::printf("e_L2 %.6e, e_F %.6e\n", summary.e_l2, summary.e_f);
  std::printf("outputs in %s\n", out_dir);
  return exit_ok;
}

int cmd_convergence(const Options& opt, int min_level) {
  pnsfem_config* cfg = nullptr;
  int status = load_config(opt, &cfg);
  if (status != PNSFEM_OK) return fail(status);

  const int max_level = opt.level > 0 ? opt.level : 3;
  char out_dir[512] = {0};
  pnsfem_config_get(cfg, "output.dir", out_dir, sizeof out_dir);
  status = pnsfem_convergence_sweep(cfg, min_level, max_level);
  pnsfem_config_destroy(cfg);
  if (status != PNSFEM_OK) return fail(status);

  const std::string report = std::string(out_dir) + "/report.csv";
  if (FILE* f = std::fopen(report.c_str(), "r")) {
    char line[4096];
    while (std::fgets(line, sizeof line, f)) std::fputs(line, stdout);
    std::fclose(f);
  }
  return exit_ok;
}

int cmd_verify(const Options& opt, const std::string& report_path) {
  pnsfem_config* cfg = nullptr;
  int status = load_config(opt, &cfg);
  if (status != PNSFEM_OK) return fail(status);

  int failed = 0;
  status = pnsfem_verify(cfg, report_path.empty() ? nullptr : report_path.c_str(), &failed);
  pnsfem_config_destroy(cfg);
  if (status != PNSFEM_OK) return fail(status);
  return failed == 0 ? exit_ok : exit_solver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-Navier-Stokes finite element solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pnsfem_version());

  Options opt;
  std::string mesh_out;
  std::string verify_report;
  int min_level = 1;

  CLI::App* mesh = app.add_subcommand("mesh", "build and inspect the experiment mesh");
  add_common_flags(mesh, opt);
  mesh->add_option("--write", mesh_out, "write the mesh to this file");

  CLI::App* solve = app.add_subcommand("solve", "run the configured experiment");
  add_common_flags(solve, opt);

  CLI::App* conv = app.add_subcommand("convergence", "run levels 1..n and tabulate errors");
  add_common_flags(conv, opt);
  conv->add_option("--min-level", min_level, "first level of the sweep");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common_flags(verify, opt);
  verify->add_option("--report", verify_report, "write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  if (mesh->parsed()) return cmd_mesh(opt, mesh_out);
  if (solve->parsed()) return cmd_solve(opt);
  if (conv->parsed()) return cmd_convergence(opt, min_level);
  if (verify->parsed()) return cmd_verify(opt, verify_report);
  return exit_config;
}
