#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "symnash.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    char *buf = malloc(n + 1);
    if (fread(buf, 1, n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = 0;
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc < 2) return 10;
    char *json = slurp(argv[1]);
    if (!json) return 11;
    SymnashGame *game = NULL;
    if (symnash_game_from_json(json, &game) != SYMNASH_STATUS_OK) {
        fprintf(stderr, "%s\n", symnash_last_error());
        return 12;
    }
    free(json);
    size_t winners[] = {0, 1};
    SymnashSolution *sol = NULL;
    SymnashStatus st = symnash_find(game, winners, 2, NULL, 0, 1, NULL, &sol);
    if (st != SYMNASH_STATUS_OK) return 13;
    if (!symnash_solution_is_winner(sol, 0) || !symnash_solution_is_winner(sol, 1)) return 14;
    const char *witness = symnash_solution_witness(sol);
    if (symnash_check(game, witness, winners, 2, NULL, 0, NULL) != SYMNASH_STATUS_OK) return 15;
    printf("%s", witness);
    symnash_solution_free(sol);
    symnash_game_free(game);
    return 0;
}
