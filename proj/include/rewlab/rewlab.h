#ifndef REWLAB_H
#define REWLAB_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define REWLAB_API __attribute__((visibility("default")))
#else
#define REWLAB_API
#endif

typedef struct rewlab_program rewlab_program;
typedef struct rewlab_config rewlab_config;

typedef enum rewlab_status {
  REWLAB_OK = 0,
  REWLAB_VIOLATED = 1,      /* check found a counterexample */
  REWLAB_INCONCLUSIVE = 2,  /* check had nothing to verify */
  REWLAB_ERR_USAGE = 10,
  REWLAB_ERR_PARSE = 11,
  REWLAB_ERR_EVAL = 12,
  REWLAB_ERR_ARITY = 13,
  REWLAB_ERR_BUDGET = 14,
  REWLAB_ERR_IO = 15,
  REWLAB_ERR_INTERNAL = 16
} rewlab_status;

REWLAB_API const char* rewlab_version(void);
/* Message of the last failing call on this thread; "" if none. */
REWLAB_API const char* rewlab_last_error(void);
REWLAB_API const char* rewlab_status_name(rewlab_status s);

/* Strings returned through char** are owned by the caller. */
REWLAB_API void rewlab_string_free(char* s);

REWLAB_API rewlab_status rewlab_program_parse(const char* text, rewlab_program** out);
REWLAB_API rewlab_status rewlab_program_load(const char* path, rewlab_program** out);
REWLAB_API void rewlab_program_free(rewlab_program* p);
REWLAB_API rewlab_status rewlab_program_print(const rewlab_program* p, char** out);
REWLAB_API rewlab_status rewlab_program_json(const rewlab_program* p, char** out);
REWLAB_API int rewlab_program_equal(const rewlab_program* a, const rewlab_program* b);

/* Analysis settings. Keys: input, params, state, grid, post, bound, f, depth, budget. */
REWLAB_API rewlab_config* rewlab_config_new(void);
REWLAB_API void rewlab_config_free(rewlab_config* c);
REWLAB_API rewlab_status rewlab_config_set(rewlab_config* c, const char* key, const char* value);

/* spec: "moment:2", "cdf:N", "excess:N", "mgf:0.5", "linear:2,3", "product", "identity" */
REWLAB_API rewlab_status rewlab_transform(const rewlab_program* p, const char* spec, int simplify,
                                          rewlab_program** out);
REWLAB_API rewlab_status rewlab_simplify(const rewlab_program* p, rewlab_program** out);
/* kind: on-termination, discount, step-indexed, step-indexed-upto, evt, first-visit, first-return */
REWLAB_API rewlab_status rewlab_gadget(const rewlab_program* p, const char* kind, const char* arg,
                                       rewlab_program** out);

/* JSON bracket report on the expected reward. */
REWLAB_API rewlab_status rewlab_eval(const rewlab_program* p, const rewlab_config* c, char** json_out);
/* JSON check report; returns REWLAB_OK, REWLAB_VIOLATED or REWLAB_INCONCLUSIVE on success. */
REWLAB_API rewlab_status rewlab_check(const rewlab_program* p, const rewlab_config* c, char** json_out);
/* CSV histogram of cumulative reward. */
REWLAB_API rewlab_status rewlab_dist(const rewlab_program* p, const rewlab_config* c, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif
