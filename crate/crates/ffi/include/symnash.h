#ifndef SYMNASH_H
#define SYMNASH_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SymnashStatus {
  SYMNASH_STATUS_OK = 0,
  /**
   * No equilibrium, or the witness was rejected.
   */
  SYMNASH_STATUS_NOT_FOUND = 1,
  SYMNASH_STATUS_INVALID_GAME = 2,
  SYMNASH_STATUS_BUDGET_EXCEEDED = 3,
  /**
   * Null pointer, bad UTF-8, out-of-range player or similar.
   */
  SYMNASH_STATUS_INVALID_ARGUMENT = 4,
  SYMNASH_STATUS_INTERNAL = 5,
} SymnashStatus;

/**
 * A validated game network.
 */
typedef struct SymnashGame SymnashGame;

/**
 * An equilibrium found by a search.
 */
typedef struct SymnashSolution SymnashSolution;

/**
 * Search limits. Zero fields take the library defaults.
 */
typedef struct SymnashBudget {
  uint64_t candidates;
  uint64_t nodes;
  uint32_t jobs;
} SymnashBudget;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *symnash_version(void);

/**
 * Message of the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *symnash_last_error(void);

/**
 * Parses and validates a game description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SymnashStatus symnash_game_from_json(const char *json, struct SymnashGame **out);

/**
 * # Safety
 * `game` must come from this library and not be used afterwards.
 */
void symnash_game_free(struct SymnashGame *game);

/**
 * Number of players, 0 for a null handle.
 *
 * # Safety
 * `game` must be null or a live handle.
 */
size_t symnash_game_players(const struct SymnashGame *game);

/**
 * Game description as JSON; free with `symnash_string_free`.
 *
 * # Safety
 * `game` must be null or a live handle.
 */
char *symnash_game_to_json(const struct SymnashGame *game);

/**
 * The symmetric game whose symmetric equilibria match `game`'s arbitrary ones.
 *
 * # Safety
 * `game` must be a live handle and `out` a valid pointer.
 */
enum SymnashStatus symnash_desymmetrize(const struct SymnashGame *game, struct SymnashGame **out);

/**
 * Searches for a symmetric equilibrium with memory `memory` in which the
 * listed players win and lose. `limits` may be null.
 *
 * # Safety
 * `game` must be a live handle, the player lists must hold the given number
 * of entries (or be null when empty) and `out` must be a valid pointer.
 */
enum SymnashStatus symnash_find(const struct SymnashGame *game,
                                const size_t *winners,
                                size_t n_winners,
                                const size_t *losers,
                                size_t n_losers,
                                uint32_t memory,
                                const struct SymnashBudget *limits,
                                struct SymnashSolution **out);

/**
 * Same as [`symnash_find`] without requiring the profile to be symmetric.
 *
 * # Safety
 * As for [`symnash_find`].
 */
enum SymnashStatus symnash_find_general(const struct SymnashGame *game,
                                        const size_t *winners,
                                        size_t n_winners,
                                        const size_t *losers,
                                        size_t n_losers,
                                        uint32_t memory,
                                        const struct SymnashBudget *limits,
                                        struct SymnashSolution **out);

/**
 * Checks a witness file. Returns `Ok` on acceptance and `NotFound` on
 * rejection.
 *
 * # Safety
 * `game` must be a live handle, `witness_json` NUL-terminated, and the
 * player lists as for [`symnash_find`].
 */
enum SymnashStatus symnash_check(const struct SymnashGame *game,
                                 const char *witness_json,
                                 const size_t *winners,
                                 size_t n_winners,
                                 const size_t *losers,
                                 size_t n_losers,
                                 const struct SymnashBudget *limits);

/**
 * # Safety
 * `sol` must come from this library and not be used afterwards.
 */
void symnash_solution_free(struct SymnashSolution *sol);

/**
 * Witness file of the solution. Owned by the handle.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
const char *symnash_solution_witness(const struct SymnashSolution *sol);

/**
 * 1 if `player` wins in the solution's outcome, 0 otherwise.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
int32_t symnash_solution_is_winner(const struct SymnashSolution *sol, size_t player);

/**
 * # Safety
 * `s` must be null or a string returned by this library that has not been
 * freed yet.
 */
void symnash_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMNASH_H */
