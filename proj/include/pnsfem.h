#ifndef PNSFEM_H
#define PNSFEM_H

/* C interface to the p-Navier-Stokes finite element solver.  All entry
 * points return a status code; on failure pnsfem_last_error() describes the
 * problem for the calling thread.  Objects are opaque handles owned by the
 * caller and released with the matching destroy function. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PNSFEM_OK 0
#define PNSFEM_ERR_ARG 1      /* null handle or out parameter */
#define PNSFEM_ERR_CONFIG 2   /* invalid configuration or key */
#define PNSFEM_ERR_SOLVER 3   /* nonlinear or linear solve failed */
#define PNSFEM_ERR_IO 4       /* file could not be read or written */
#define PNSFEM_ERR_INTERNAL 5 /* unexpected failure */

const char* pnsfem_version(void);

/* Message of the most recent failure on this thread; empty until one occurs. */
const char* pnsfem_last_error(void);

typedef struct pnsfem_mesh pnsfem_mesh;
typedef struct pnsfem_config pnsfem_config;

/* nx-by-ny squares on (x0,y0)-(x1,y1), each split into two triangles. */
int pnsfem_mesh_create_rectangle(double x0, double y0, double x1, double y1, int nx, int ny,
                                 pnsfem_mesh** out);
/* Regular refinement into four children per cell; the input is untouched. */
int pnsfem_mesh_refine(const pnsfem_mesh* mesh, pnsfem_mesh** out);
int pnsfem_mesh_stats(const pnsfem_mesh* mesh, int* n_vertices, int* n_cells, double* h_max);
/* n_defects receives the defect count; a description of the first defects is
 * copied into buf (NUL terminated, truncated to len) when buf is non-null. */
int pnsfem_mesh_validate(const pnsfem_mesh* mesh, int* n_defects, char* buf, size_t len);
int pnsfem_mesh_write(const pnsfem_mesh* mesh, const char* path);
int pnsfem_mesh_read(const char* path, pnsfem_mesh** out);
void pnsfem_mesh_destroy(pnsfem_mesh* mesh);

/* kind is "vortex", "singular", or "manufactured"; the handle starts from
 * that experiment's published defaults. */
int pnsfem_config_create(const char* kind, pnsfem_config** out);
int pnsfem_config_read(const char* path, pnsfem_config** out);
/* Keys use the dotted grammar of the config file, e.g. "experiment.family". */
int pnsfem_config_set(pnsfem_config* cfg, const char* key, const char* value);
int pnsfem_config_get(const pnsfem_config* cfg, const char* key, char* buf, size_t len);
int pnsfem_config_write(const pnsfem_config* cfg, const char* path);
void pnsfem_config_destroy(pnsfem_config* cfg);

typedef struct pnsfem_run_summary {
  int steps;            /* completed time steps */
  double h_max;         /* mesh size of the run */
  double kinetic_final; /* kinetic energy at the final time */
  int has_errors;       /* nonzero when an exact solution was available */
  double e_l2;          /* max-in-time L2 velocity error */
  double e_f;           /* natural-distance error */
} pnsfem_run_summary;

/* Runs the configured experiment; checkpoints, the energy ledger, field
 * snapshots, and error reports are written under the configured output
 * directory.  summary may be null. */
int pnsfem_run_experiment(const pnsfem_config* cfg, pnsfem_run_summary* summary);

/* Runs mesh levels n_min..n_max and writes the error table to
 * <out_dir>/report.csv; per-level outputs land in <out_dir>/level_<n>. */
int pnsfem_convergence_sweep(const pnsfem_config* cfg, int n_min, int n_max);

/* Runs the invariant suite.  The report is written to report_path, or to
 * stdout when report_path is null; n_failed may be null. */
int pnsfem_verify(const pnsfem_config* cfg, const char* report_path, int* n_failed);

#ifdef __cplusplus
}
#endif

#endif /* PNSFEM_H */
