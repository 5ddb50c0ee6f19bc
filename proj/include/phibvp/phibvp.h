/* phibvp — solver for singular strongly nonlinear second-order boundary
 * value problems (Phi(a(t,x) x')' = f(t,x,x') on [0,T]) behind a plain
 * C interface.
 *
 * Usage:
 *   phibvp_problem* p = phibvp_problem_load("problem.cfg", err, sizeof err);
 *   phibvp_result* r = NULL;
 *   phibvp_status s = phibvp_run(p, "solve", &r);
 *   ... phibvp_result_solution_csv(r), phibvp_result_report_json(r) ...
 *   phibvp_result_free(r);
 *   phibvp_problem_free(p);
 *
 * All strings returned from a result are owned by that result and stay
 * valid until phibvp_result_free. Problems and results are immutable
 * after creation; distinct handles may be used from distinct threads.
 */
#ifndef PHIBVP_H
#define PHIBVP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct phibvp_problem phibvp_problem;
typedef struct phibvp_result phibvp_result;

/* Status values double as CLI exit codes. */
typedef enum phibvp_status {
    PHIBVP_OK = 0,
    PHIBVP_ERROR = 1,          /* I/O, parse, usage */
    PHIBVP_INVALID = 2,        /* hypothesis audit or precondition failed */
    PHIBVP_SOLVER_FAILED = 3,  /* no convergence / no sign change; artifacts available */
} phibvp_status;

/* Loads a problem from a config file (or from config text). On failure
 * returns NULL and writes a diagnostic into errbuf (when non-NULL). */
phibvp_problem* phibvp_problem_load(const char* path, char* errbuf, size_t errlen);
phibvp_problem* phibvp_problem_parse(const char* text, char* errbuf, size_t errlen);
void phibvp_problem_free(phibvp_problem* p);

/* Runs one of "solve", "verify", "bounds", "sweep". A result handle is
 * produced even on failure statuses (except allocation failure) so the
 * report and message remain inspectable. */
phibvp_status phibvp_run(const phibvp_problem* p, const char* command, phibvp_result** out);

phibvp_status phibvp_result_status(const phibvp_result* r);
const char* phibvp_result_message(const phibvp_result* r);

/* JSON report ("schema": 1); always present. */
const char* phibvp_result_report_json(const phibvp_result* r);

/* Solution CSV (t,x,dx,Ax,local_residual); empty unless the command was
 * "solve". */
const char* phibvp_result_solution_csv(const phibvp_result* r);

/* Sweep profile CSV (nu,s); empty unless produced by "sweep" or a
 * shooting solve. */
const char* phibvp_result_profile_csv(const phibvp_result* r);

/* 1 when a "solve" run converged. */
int phibvp_result_converged(const phibvp_result* r);

/* Node access for the solved path; returns the number of nodes copied
 * (at most cap). t and x may each be NULL. */
size_t phibvp_result_num_nodes(const phibvp_result* r);
size_t phibvp_result_nodes(const phibvp_result* r, double* t, double* x, size_t cap);

void phibvp_result_free(phibvp_result* r);

const char* phibvp_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PHIBVP_H */
