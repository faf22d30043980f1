#ifndef GRADEKIT_H
#define GRADEKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GkStatus {
  GK_STATUS_OK = 0,
  /**
   * A computation or parse error; see `gk_last_error`.
   */
  GK_STATUS_ERROR = 1,
  /**
   * The answer is negative (for example "not extendable").
   */
  GK_STATUS_REFUTED = 2,
  GK_STATUS_NULL_ARGUMENT = 3,
  GK_STATUS_INVALID_UTF8 = 4,
  GK_STATUS_PANIC = 5,
} GkStatus;

/**
 * Parsed problem document.
 */
typedef struct GkDocument GkDocument;

/**
 * A finite field GF(p^k).
 */
typedef struct GkField GkField;

/**
 * Result of running one command.
 */
typedef struct GkReport GkReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or NULL. Owned by the library.
 */
const char *gk_last_error(void);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GkStatus gk_document_parse(const char *json, struct GkDocument **out);

/**
 * # Safety
 * `doc` must come from `gk_document_parse` (or be NULL) and not be used afterwards.
 */
void gk_document_free(struct GkDocument *doc);

/**
 * Run `command` on a document. Returns `Refuted` when the report's answer is
 * negative; the report is produced in that case too.
 *
 * # Safety
 * Pointers must be valid; `command` NUL-terminated.
 */
enum GkStatus gk_run(const struct GkDocument *doc,
                     const char *command,
                     uint64_t seed,
                     struct GkReport **out);

/**
 * # Safety
 * `report` must be a valid report handle.
 */
enum GkStatus gk_report_status(const struct GkReport *report);

/**
 * Render a report; `structured` non-zero selects JSON. Free the string with
 * `gk_string_free`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GkStatus gk_report_render(const struct GkReport *report, int32_t structured, char **out);

/**
 * # Safety
 * `report` must come from `gk_run` (or be NULL).
 */
void gk_report_free(struct GkReport *report);

/**
 * # Safety
 * `s` must come from this library (or be NULL).
 */
void gk_string_free(char *s);

/**
 * GF(p^k) with the default modulus.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GkStatus gk_field_new(uint64_t p, uint32_t k, struct GkField **out);

/**
 * # Safety
 * `field` must come from `gk_field_new` (or be NULL).
 */
void gk_field_free(struct GkField *field);

/**
 * Field order q.
 *
 * # Safety
 * `field` must be a valid handle.
 */
uint32_t gk_field_order(const struct GkField *field);

/**
 * Elements are integer codes Σ c_i p^i.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GkStatus gk_field_add(const struct GkField *field, uint32_t a, uint32_t b, uint32_t *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum GkStatus gk_field_mul(const struct GkField *field, uint32_t a, uint32_t b, uint32_t *out);

/**
 * Fails with `Error` on division by zero.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GkStatus gk_field_div(const struct GkField *field, uint32_t a, uint32_t b, uint32_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GRADEKIT_H */
