#ifndef TCI_TCI_C_H
#define TCI_TCI_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TCI_API __declspec(dllexport)
#else
#define TCI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns a status; on failure the thread-local message from
 * tci_last_error() describes it and output parameters are left untouched.
 * Strings returned through char** are owned by the caller and released with
 * tci_string_free. Reports are canonical JSON documents. */
typedef enum tci_status {
  TCI_OK = 0,
  TCI_ERR_INVALID_NODE = 1,
  TCI_ERR_INVALID_ARGUMENT = 2,
  TCI_ERR_INVALID_WALK = 3,
  TCI_ERR_COLLISION = 4,
  TCI_ERR_INVALID_MAP = 5,
  TCI_ERR_UNKNOWN_VARIABLE = 6,
  TCI_ERR_NAME_CLASH = 7,
  TCI_ERR_MISSING_VARIABLE = 8,
  TCI_ERR_SCHEMA_MISMATCH = 9,
  TCI_ERR_SPACE_MISMATCH = 10,
  TCI_ERR_PRECONDITION = 11,
  TCI_ERR_INVALID_QUERY = 12,
  TCI_ERR_BUDGET = 13,
  TCI_ERR_PARSE = 14,
  TCI_ERR_MALFORMED_TABLE = 15,
  TCI_ERR_INVALID_MODEL = 16,
  TCI_ERR_NULL_ARGUMENT = 100,
  TCI_ERR_INTERNAL = 101
} tci_status;

typedef struct tci_graph tci_graph;
typedef struct tci_kernel tci_kernel;
typedef struct tci_space tci_space; /* transition space K(W|T) */
typedef struct tci_rv tci_rv;       /* random variable over a transition space */
typedef struct tci_cbn tci_cbn;

/* A list of node or variable names. */
typedef struct tci_names {
  const char* const* items;
  size_t count;
} tci_names;

TCI_API const char* tci_version(void);
TCI_API const char* tci_last_error(void);
/* Stable kebab-case name, e.g. "parse" or "invalid-query". */
TCI_API const char* tci_status_name(tci_status status);
TCI_API void tci_string_free(char* s);

/* ------------------------------------------------------------------ graphs */

TCI_API tci_status tci_graph_from_json(const char* json, tci_graph** out);
TCI_API tci_status tci_graph_to_json(const tci_graph* g, char** out);
TCI_API void tci_graph_free(tci_graph* g);

/* {"acyclic", "topological_order", "components", "parents", "ancestors"} */
TCI_API tci_status tci_graph_describe(const tci_graph* g, char** out);

typedef enum tci_surgery {
  TCI_SURGERY_HARD = 0,        /* nodes become inputs */
  TCI_SURGERY_SOFT = 1,        /* adds an input I:v per node */
  TCI_SURGERY_MARGINALIZE = 2, /* latent projection */
  TCI_SURGERY_ACYCLIFY = 3     /* nodes ignored */
} tci_surgery;

TCI_API tci_status tci_graph_surgery(const tci_graph* g, tci_surgery kind, tci_names nodes, tci_graph** out);

enum {
  TCI_SEP_RAW = 1u,    /* target B alone instead of J and B */
  TCI_SEP_ORACLE = 2u  /* also run the walk-state search and report agreement */
};

/* report: {"separated": bool, "walk"?: "a -> b", "oracle"?: bool} */
TCI_API tci_status tci_sigma_separated(const tci_graph* g, tci_names a, tci_names b, tci_names c, unsigned flags,
                                       int* separated, char** report);

/* ----------------------------------------------------------------- kernels */

TCI_API tci_status tci_kernel_from_json(const char* json, tci_kernel** out);
TCI_API tci_status tci_kernel_to_json(const tci_kernel* k, char** out);
TCI_API void tci_kernel_free(tci_kernel* k);

TCI_API tci_status tci_kernel_compose(const tci_kernel* left, const tci_kernel* right, tci_kernel** out);
TCI_API tci_status tci_kernel_product(const tci_kernel* left, const tci_kernel* right, tci_kernel** out);
TCI_API tci_status tci_kernel_marginalize(const tci_kernel* k, tci_names keep, tci_kernel** out);
TCI_API tci_status tci_kernel_disintegrate(const tci_kernel* k, tci_names on, tci_kernel** out);
TCI_API tci_status tci_kernel_equal(const tci_kernel* a, const tci_kernel* b, int* equal);

/* ------------------------------------------------------ conditional independence */

/* Accepts {"kernel": K(W|T)} or a bare kernel. */
TCI_API tci_status tci_space_from_json(const char* json, tci_space** out);
TCI_API void tci_space_free(tci_space* ts);

/* Deterministic map, kernel or {"project": [...]} document over the space's domain. */
TCI_API tci_status tci_rv_from_json(const tci_space* ts, const char* json, tci_rv** out);
/* The constant variable. */
TCI_API tci_status tci_rv_constant(const tci_space* ts, tci_rv** out);
TCI_API void tci_rv_free(tci_rv* x);

enum {
  TCI_CI_BATTERY = 1u /* add the equivalent-formulation battery to the report */
};

/* X ⊥ Y | Z. report: {"independent", "witness" | "counterexample", "battery"?} */
TCI_API tci_status tci_ci_check(const tci_space* ts, const tci_rv* x, const tci_rv* y, const tci_rv* z, unsigned flags,
                                int* independent, char** report);

/* ---------------------------------------------------------------- networks */

TCI_API tci_status tci_cbn_from_json(const char* json, tci_cbn** out);
TCI_API tci_status tci_cbn_to_json(const tci_cbn* m, char** out);
TCI_API void tci_cbn_free(tci_cbn* m);

/* Joint kernel of the observed nodes given the inputs. */
TCI_API tci_status tci_cbn_observational(const tci_cbn* m, tci_kernel** out);

/* Hard intervention on `hard`, then soft intervention on `soft`. */
TCI_API tci_status tci_cbn_intervene(const tci_cbn* m, tci_names hard, tci_names soft, tci_cbn** out);

typedef struct tci_gmp_options {
  int sample;          /* 0: all triples, 1: `samples` random triples */
  size_t samples;
  uint64_t seed;
  size_t budget_nodes; /* 0 selects the default */
  int keep_witnesses;
} tci_gmp_options;

/* holds = no separated triple fails independence. */
TCI_API tci_status tci_cbn_verify_gmp(const tci_cbn* m, const tci_gmp_options* options, int* holds, char** report);

/* ok = premise holds and every version check passed. */
TCI_API tci_status tci_cbn_do_calculus(const tci_cbn* m, int rule, tci_names a, tci_names b, tci_names c, tci_names d,
                                       int* ok, char** report);
TCI_API tci_status tci_cbn_backdoor(const tci_cbn* m, tci_names a, tci_names b, tci_names c, tci_names f, tci_names d,
                                    int* ok, char** report);

/* ------------------------------------------------------- reparameterization */

/* embedding: {"variable", "outcomes", "values"} for the kernel's single target variable. */
TCI_API tci_status tci_reparam_verify(const tci_kernel* k, const char* embedding_json, int* ok, char** report);

/* ---------------------------------------------------------------- fuzzing */

typedef enum tci_relation {
  TCI_RELATION_SIGMA = 0, /* σ-separation on random graphs */
  TCI_RELATION_TCI = 1,   /* conditional independence on random transition spaces */
  TCI_RELATION_FILE = 2   /* a tabulated oracle document */
} tci_relation;

typedef struct tci_fuzz_options {
  size_t instances;
  size_t samples; /* per rule and instance when the carrier is too large to enumerate */
  uint64_t seed;
} tci_fuzz_options;

/* passed = no rule violation. Failures are reported shrunk. */
TCI_API tci_status tci_fuzz_separoid(tci_relation relation, const char* oracle_json, const tci_fuzz_options* options,
                                     int* passed, char** report);

#ifdef __cplusplus
}
#endif

#endif
