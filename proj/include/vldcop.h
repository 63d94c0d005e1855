#ifndef VLDCOP_H
#define VLDCOP_H

/* C interface to the VL-DCOP simulation library.
 *
 * All functions returning int use 0 for success and a negative error code
 * otherwise; vldcop_last_error() describes the most recent failure on the
 * calling thread. Strings returned through out-parameters are heap-allocated
 * and must be released with vldcop_string_free(). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define VLDCOP_OK 0
#define VLDCOP_EINVAL -1   /* bad argument or malformed input */
#define VLDCOP_EIO -2      /* file could not be read or written */
#define VLDCOP_EFAILED -3  /* operation ran but did not succeed */

typedef struct vldcop_task vldcop_task;
typedef struct vldcop_run vldcop_run;

const char* vldcop_version(void);

/* Thread-local message for the last error; never NULL. */
const char* vldcop_last_error(void);

void vldcop_string_free(char* s);

/* ---- tasks ---- */

/* benchmark: "ldgc" | "vldgc" | "ldms"; topology: "random" | "scale-free". */
int vldcop_task_generate(const char* benchmark, const char* topology, int n,
                         int m, int domain_size, uint64_t seed,
                         vldcop_task** out);
int vldcop_task_load(const char* path, vldcop_task** out);
int vldcop_task_save(const vldcop_task* task, const char* path);

/* Serialized task document. */
int vldcop_task_text(const vldcop_task* task, char** out);

/* One-line human summary (benchmark, sizes, seed). */
int vldcop_task_summary(const vldcop_task* task, char** out);

/* Re-checks every task invariant; returns VLDCOP_EFAILED when one fails. */
int vldcop_task_validate(const vldcop_task* task);

/* Writes the task document plus one instruction file per agent (and the
 * rendered preference chart where the agent has one) into dir. */
int vldcop_task_export(const vldcop_task* task, const char* dir);

void vldcop_task_free(vldcop_task* task);

/* ---- runs ---- */

/* config_json: a RunConfig object as documented in the README. */
int vldcop_run_execute(const char* config_json, vldcop_run** out);

int vldcop_run_save(const vldcop_run* run, const char* path);
int vldcop_run_load(const char* path, vldcop_run** out);

/* Run log as line-delimited records. */
int vldcop_run_text(const vldcop_run* run, char** out);

/* Metrics summary as a JSON object. */
int vldcop_run_metrics(const vldcop_run* run, char** out);

void vldcop_run_free(vldcop_run* run);

/* ---- reporting and export ---- */

/* Aggregates run logs and writes aggregate.csv, aggregate.txt and
 * cost_curves.svg into out_dir. */
int vldcop_report(const char* const* run_paths, size_t count,
                  const char* out_dir);

/* kinds: comma-separated task-kind filter, "" or NULL for all.
 * budget 0 exports every captured pair. Writes the pair count to out_count
 * when non-NULL. */
int vldcop_export_distill(const char* const* run_paths, size_t count,
                          const char* kinds, long budget, const char* path,
                          long* out_count);

/* Validates a task document or run log on disk by extension-free sniffing. */
int vldcop_validate_file(const char* path);

#ifdef __cplusplus
}
#endif

#endif /* VLDCOP_H */
