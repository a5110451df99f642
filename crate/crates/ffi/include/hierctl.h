#ifndef HIERCTL_H
#define HIERCTL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Reduction codes accepted by [`hc_gadget`].
 */
typedef enum HcGadget {
  HC_GADGET_OC = 0,
  HC_GADGET_MOC = 1,
  HC_GADGET_LOC = 2,
} HcGadget;

/**
 * Property codes accepted by [`hc_check`].
 */
typedef enum HcProperty {
  HC_PROPERTY_OC = 0,
  HC_PROPERTY_LOC = 1,
  HC_PROPERTY_MOC = 2,
  HC_PROPERTY_OBSERVER = 3,
  HC_PROPERTY_LCC = 4,
  HC_PROPERTY_CONTROLLABILITY = 5,
  HC_PROPERTY_OBSERVABILITY = 6,
  HC_PROPERTY_NORMALITY = 7,
  HC_PROPERTY_RELOBS = 8,
  HC_PROPERTY_NONCONFLICTING = 9,
} HcProperty;

typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_UTF8 = 2,
  /**
   * The automaton text does not parse.
   */
  HC_STATUS_PARSE = 3,
  /**
   * Mismatched alphabets, violated preconditions and the like.
   */
  HC_STATUS_INVALID = 4,
  /**
   * An argument is out of range, e.g. an unknown property code.
   */
  HC_STATUS_BAD_ARGUMENT = 5,
  /**
   * The library panicked; this is a bug.
   */
  HC_STATUS_INTERNAL = 6,
} HcStatus;

typedef enum HcVerdict {
  HC_VERDICT_HOLDS = 0,
  HC_VERDICT_VIOLATED = 1,
  HC_VERDICT_INCONCLUSIVE = 2,
} HcVerdict;

/**
 * Opaque automaton handle.
 */
typedef struct HcAutomaton HcAutomaton;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an automaton in `.saut` text form.
 *
 * # Safety
 * `source` must be a nul-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_automaton_parse(const char *source, bool allow_reserved, struct HcAutomaton **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `a` must come from this library and not have been freed.
 */
void hc_automaton_free(struct HcAutomaton *a);

/**
 * Number of states, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
uintptr_t hc_automaton_num_states(const struct HcAutomaton *a);

/**
 * Writes the `.saut` text of `a` to `*out`; free it with [`hc_string_free`].
 *
 * # Safety
 * `a` must be a live handle and `out` a valid pointer.
 */
enum HcStatus hc_automaton_to_saut(const struct HcAutomaton *a, char **out);

/**
 * Decides a property (an `HcProperty` code). `spec` and `ambient` may be
 * null when the property does not use them; a specification over part of
 * the plant alphabet stands for its composition with the plant. When
 * `witness_json` is not null it receives the violation witness as JSON,
 * or null if there is none.
 *
 * # Safety
 * Handles must be live or null as documented; `verdict` must be valid and
 * `witness_json` null or valid.
 */
enum HcStatus hc_check(uint32_t property_code,
                       const struct HcAutomaton *plant,
                       const struct HcAutomaton *spec,
                       const struct HcAutomaton *ambient,
                       uintptr_t budget,
                       enum HcVerdict *verdict,
                       char **witness_json);

/**
 * Supremal normal sublanguage of the prefix-closed `spec` within the
 * plant's generated language.
 *
 * # Safety
 * Handles must be live and `out` valid.
 */
enum HcStatus hc_sup_normal(const struct HcAutomaton *spec,
                            const struct HcAutomaton *plant,
                            struct HcAutomaton **out);

/**
 * Builds the reduction plant (an `HcGadget` code) from an all-marked NFA.
 *
 * # Safety
 * `input` must be a live handle and `out` valid.
 */
enum HcStatus hc_gadget(uint32_t kind, const struct HcAutomaton *input, struct HcAutomaton **out);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library.
 */
const char *hc_last_error(void);

/**
 * Releases a string returned by the library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void hc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HIERCTL_H */
