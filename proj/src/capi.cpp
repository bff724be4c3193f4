#include "pnsfem.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pnsfem/experiments.hpp"

struct pnsfem_mesh {
  pnsfem::Mesh m;
};

struct pnsfem_config {
  pnsfem::ExperimentConfig c;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

int arg_error(const char* msg) {
  set_error(msg);
  return PNSFEM_ERR_ARG;
}

// Runs f, translating exceptions to status codes.  runtime_status is the
// code for plain runtime failures of this entry point.
template <class F>
int guarded(int runtime_status, F&& f) noexcept {
  try {
    f();
    return PNSFEM_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return PNSFEM_ERR_CONFIG;
  } catch (const std::filesystem::filesystem_error& e) {
    set_error(e.what());
    return PNSFEM_ERR_IO;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    if (std::string(e.what()).find("cannot open") != std::string::npos) return PNSFEM_ERR_IO;
    return runtime_status;
  } catch (const std::exception& e) {
    set_error(e.what());
    return PNSFEM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return PNSFEM_ERR_INTERNAL;
  }
}

void copy_out(const std::string& text, char* buf, size_t len) {
  if (!buf || len == 0) return;
  const size_t n = std::min(text.size(), len - 1);
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

}  // namespace

extern "C" {

const char* pnsfem_version(void) { return "0.1.0"; }

const char* pnsfem_last_error(void) { return g_last_error.c_str(); }

int pnsfem_mesh_create_rectangle(double x0, double y0, double x1, double y1, int nx, int ny,
                                 pnsfem_mesh** out) {
  if (!out) return arg_error("null mesh out parameter");
  *out = nullptr;
  return guarded(PNSFEM_ERR_INTERNAL, [&] {
    *out = new pnsfem_mesh{pnsfem::build_rectangle_mesh(x0, y0, x1, y1, nx, ny)};
  });
}

int pnsfem_mesh_refine(const pnsfem_mesh* mesh, pnsfem_mesh** out) {
  if (!mesh || !out) return arg_error("null mesh handle");
  *out = nullptr;
  return guarded(PNSFEM_ERR_INTERNAL,
                 [&] { *out = new pnsfem_mesh{pnsfem::refine_regular(mesh->m).first}; });
}

int pnsfem_mesh_stats(const pnsfem_mesh* mesh, int* n_vertices, int* n_cells, double* h_max) {
  if (!mesh) return arg_error("null mesh handle");
  if (n_vertices) *n_vertices = static_cast<int>(mesh->m.vertices.size());
  if (n_cells) *n_cells = static_cast<int>(mesh->m.cells.size());
  if (h_max) *h_max = mesh->m.h_max;
  return PNSFEM_OK;
}

int pnsfem_mesh_validate(const pnsfem_mesh* mesh, int* n_defects, char* buf, size_t len) {
  if (!mesh) return arg_error("null mesh handle");
  return guarded(PNSFEM_ERR_INTERNAL, [&] {
    const std::vector<std::string> defects = pnsfem::validate(mesh->m);
    if (n_defects) *n_defects = static_cast<int>(defects.size());
    std::string joined;
    for (const std::string& d : defects) {
      if (!joined.empty()) joined += "\n";
      joined += d;
    }
    copy_out(joined, buf, len);
  });
}

int pnsfem_mesh_write(const pnsfem_mesh* mesh, const char* path) {
  if (!mesh || !path) return arg_error("null mesh handle or path");
  return guarded(PNSFEM_ERR_IO, [&] { pnsfem::write_mesh_file(mesh->m, path); });
}

int pnsfem_mesh_read(const char* path, pnsfem_mesh** out) {
  if (!path || !out) return arg_error("null path or mesh out parameter");
  *out = nullptr;
  return guarded(PNSFEM_ERR_IO, [&] { *out = new pnsfem_mesh{pnsfem::read_mesh_file(path)}; });
}

void pnsfem_mesh_destroy(pnsfem_mesh* mesh) { delete mesh; }

int pnsfem_config_create(const char* kind, pnsfem_config** out) {
  if (!kind || !out) return arg_error("null kind or config out parameter");
  *out = nullptr;
  return guarded(PNSFEM_ERR_CONFIG, [&] {
    *out = new pnsfem_config{pnsfem::default_config(pnsfem::kind_from_string(kind))};
  });
}

int pnsfem_config_read(const char* path, pnsfem_config** out) {
  if (!path || !out) return arg_error("null path or config out parameter");
  *out = nullptr;
  return guarded(PNSFEM_ERR_IO, [&] { *out = new pnsfem_config{pnsfem::parse_config_file(path)}; });
}

int pnsfem_config_set(pnsfem_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return arg_error("null config handle, key, or value");
  return guarded(PNSFEM_ERR_CONFIG, [&] { pnsfem::apply_config_line(cfg->c, key, value); });
}

int pnsfem_config_get(const pnsfem_config* cfg, const char* key, char* buf, size_t len) {
  if (!cfg || !key || !buf) return arg_error("null config handle, key, or buffer");
  return guarded(PNSFEM_ERR_CONFIG, [&] {
    std::istringstream text(pnsfem::config_to_string(cfg->c));
    const std::string wanted(key);
    std::string line;
    while (std::getline(text, line)) {
      const size_t eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      if (line.substr(0, eq) == wanted) {
        copy_out(line.substr(eq + 3), buf, len);
        return;
      }
    }
    throw std::invalid_argument("unknown config key '" + wanted + "'");
  });
}

int pnsfem_config_write(const pnsfem_config* cfg, const char* path) {
  if (!cfg || !path) return arg_error("null config handle or path");
  return guarded(PNSFEM_ERR_IO, [&] { pnsfem::write_config_file(cfg->c, path); });
}

void pnsfem_config_destroy(pnsfem_config* cfg) { delete cfg; }

int pnsfem_run_experiment(const pnsfem_config* cfg, pnsfem_run_summary* summary) {
  if (!cfg) return arg_error("null config handle");
  return guarded(PNSFEM_ERR_SOLVER, [&] {
    const pnsfem::RunResult r = pnsfem::run_experiment(cfg->c);
    if (!summary) return;
    summary->steps = static_cast<int>(r.traj.records.size());
    summary->h_max = r.h;
    summary->kinetic_final =
        r.traj.records.empty() ? r.traj.initial_kinetic : r.traj.records.back().kinetic;
    summary->has_errors = r.has_errors ? 1 : 0;
    summary->e_l2 = r.e_l2;
    summary->e_f = r.e_f;
  });
}

int pnsfem_convergence_sweep(const pnsfem_config* cfg, int n_min, int n_max) {
  if (!cfg) return arg_error("null config handle");
  return guarded(PNSFEM_ERR_SOLVER,
                 [&] { pnsfem::convergence_sweep(cfg->c, n_min, n_max); });
}

int pnsfem_verify(const pnsfem_config* cfg, const char* report_path, int* n_failed) {
  if (!cfg) return arg_error("null config handle");
  return guarded(PNSFEM_ERR_INTERNAL, [&] {
    const pnsfem::VerifyReport report = pnsfem::verify(cfg->c);
    if (report_path) {
      std::ofstream out(report_path);
      if (!out) throw std::runtime_error(std::string("cannot open ") + report_path);
      pnsfem::write_verify_report(report, out);
    } else {
      pnsfem::write_verify_report(report, std::cout);
    }
    if (n_failed) {
      int failed = 0;
      for (const pnsfem::VerifyCheck& c : report.checks)
        if (!c.pass) ++failed;
      *n_failed = failed;
    }
  });
}

}  // extern "C"
