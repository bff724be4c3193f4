#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "pnsfem.h"

namespace fs = std::filesystem;

TEST_CASE("version string") {
  CHECK(std::string(pnsfem_version()) == "0.1.0");
}

TEST_CASE("mesh lifecycle through the c interface") {
  pnsfem_mesh* mesh = nullptr;
  REQUIRE(pnsfem_mesh_create_rectangle(0.0, 0.0, 3.0, 1.0, 48, 16, &mesh) == PNSFEM_OK);

  int nv = 0, nc = 0;
  double h = 0.0;
  REQUIRE(pnsfem_mesh_stats(mesh, &nv, &nc, &h) == PNSFEM_OK);
  CHECK(nv == 49 * 17);
  CHECK(nc == 1536);
  CHECK(h == doctest::Approx(std::sqrt(2.0) / 16.0).epsilon(1e-14));

  int defects = -1;
  char msg[256];
  REQUIRE(pnsfem_mesh_validate(mesh, &defects, msg, sizeof msg) == PNSFEM_OK);
  CHECK(defects == 0);

  pnsfem_mesh* fine = nullptr;
  REQUIRE(pnsfem_mesh_refine(mesh, &fine) == PNSFEM_OK);
  REQUIRE(pnsfem_mesh_stats(fine, &nv, &nc, &h) == PNSFEM_OK);
  CHECK(nc == 4 * 1536);
  CHECK(h == doctest::Approx(std::sqrt(2.0) / 32.0).epsilon(1e-14));

  const fs::path path = fs::temp_directory_path() / "pnsfem_capi_mesh.txt";
  REQUIRE(pnsfem_mesh_write(mesh, path.string().c_str()) == PNSFEM_OK);
  pnsfem_mesh* back = nullptr;
  REQUIRE(pnsfem_mesh_read(path.string().c_str(), &back) == PNSFEM_OK);
  int nv2 = 0, nc2 = 0;
  double h2 = 0.0;
  REQUIRE(pnsfem_mesh_stats(back, &nv2, &nc2, &h2) == PNSFEM_OK);
  CHECK(nv2 == 49 * 17);
  CHECK(nc2 == 1536);

  pnsfem_mesh_destroy(back);
  pnsfem_mesh_destroy(fine);
  pnsfem_mesh_destroy(mesh);
  fs::remove(path);
}

TEST_CASE("error paths set codes and messages") {
  pnsfem_mesh* mesh = nullptr;
  CHECK(pnsfem_mesh_read("/nonexistent/mesh.txt", &mesh) == PNSFEM_ERR_IO);
  CHECK(std::strlen(pnsfem_last_error()) > 0);
  CHECK(mesh == nullptr);

  CHECK(pnsfem_mesh_create_rectangle(0, 0, 1, 1, 2, 2, nullptr) == PNSFEM_ERR_ARG);
  CHECK(pnsfem_mesh_stats(nullptr, nullptr, nullptr, nullptr) == PNSFEM_ERR_ARG);
  CHECK(pnsfem_mesh_refine(nullptr, &mesh) == PNSFEM_ERR_ARG);

  pnsfem_config* cfg = nullptr;
  CHECK(pnsfem_config_create("cavity", &cfg) == PNSFEM_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(pnsfem_config_read("/nonexistent/run.cfg", &cfg) == PNSFEM_ERR_CONFIG);
}

TEST_CASE("config handles expose the key grammar") {
  pnsfem_config* cfg = nullptr;
  REQUIRE(pnsfem_config_create("singular", &cfg) == PNSFEM_OK);

  char buf[128];
  REQUIRE(pnsfem_config_get(cfg, "model.p", buf, sizeof buf) == PNSFEM_OK);
  CHECK(std::string(buf) == "2.2");
  REQUIRE(pnsfem_config_get(cfg, "time.K", buf, sizeof buf) == PNSFEM_OK);
  CHECK(std::string(buf) == "250");

  REQUIRE(pnsfem_config_set(cfg, "experiment.family", "taylor_hood") == PNSFEM_OK);
  REQUIRE(pnsfem_config_get(cfg, "experiment.family", buf, sizeof buf) == PNSFEM_OK);
  CHECK(std::string(buf) == "taylor_hood");

  CHECK(pnsfem_config_set(cfg, "model.p", "soft") == PNSFEM_ERR_CONFIG);
  CHECK(pnsfem_config_get(cfg, "model.q", buf, sizeof buf) == PNSFEM_ERR_CONFIG);
  CHECK(std::strlen(pnsfem_last_error()) > 0);

  const fs::path path = fs::temp_directory_path() / "pnsfem_capi_config.txt";
  REQUIRE(pnsfem_config_write(cfg, path.string().c_str()) == PNSFEM_OK);
  pnsfem_config* back = nullptr;
  REQUIRE(pnsfem_config_read(path.string().c_str(), &back) == PNSFEM_OK);
  REQUIRE(pnsfem_config_get(back, "experiment.family", buf, sizeof buf) == PNSFEM_OK);
  CHECK(std::string(buf) == "taylor_hood");

  pnsfem_config_destroy(back);
  pnsfem_config_destroy(cfg);
  fs::remove(path);
}

TEST_CASE("experiment run through the c interface") {
  const fs::path dir = fs::temp_directory_path() / "pnsfem_capi_run";
  fs::remove_all(dir);

  pnsfem_config* cfg = nullptr;
  REQUIRE(pnsfem_config_create("manufactured", &cfg) == PNSFEM_OK);
  REQUIRE(pnsfem_config_set(cfg, "time.K", "2") == PNSFEM_OK);
  REQUIRE(pnsfem_config_set(cfg, "time.T", "0.02") == PNSFEM_OK);
  REQUIRE(pnsfem_config_set(cfg, "output.dir", dir.string().c_str()) == PNSFEM_OK);

  pnsfem_run_summary summary;
  REQUIRE(pnsfem_run_experiment(cfg, &summary) == PNSFEM_OK);
  CHECK(summary.steps == 2);
  CHECK(summary.h_max == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(summary.has_errors == 1);
  CHECK(summary.e_l2 > 0.0);
  CHECK(summary.e_f > 0.0);
  CHECK(summary.kinetic_final > 0.0);
  CHECK(fs::exists(dir / "energy.csv"));

  pnsfem_config_destroy(cfg);
  fs::remove_all(dir);
}
