#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "roabp_pit.h"

static const char *SUM =
    "roabp-instance v1\nkind roabp\nprime 10007\nn 2\nd 1\nw 2\norder 1 2\n"
    "layer 1 1 2\ndeg 0\n0 1\ndeg 1\n1 0\n"
    "layer 2 2 1\ndeg 0\n1\n0\ndeg 1\n0\n1\nend\n";

#define CHECK(cond)                                                      \
  do {                                                                   \
    if (!(cond)) {                                                       \
      char msg[256];                                                     \
      roabp_last_error_message(msg, sizeof msg);                         \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond, msg);       \
      return 1;                                                          \
    }                                                                    \
  } while (0)

int main(void) {
  RoabpInstance *inst = NULL;
  CHECK(roabp_instance_parse(SUM, 0, &inst) == ROABP_STATUS_OK);

  uint64_t point[2] = {3, 5}, value = 0;
  CHECK(roabp_instance_eval(inst, point, 2, &value) == ROABP_STATUS_OK);
  CHECK(value == 8);

  RoabpVerdict verdict;
  uint64_t witness[2];
  CHECK(roabp_pit_known_order(inst, &verdict, witness) == ROABP_STATUS_OK);
  CHECK(verdict == ROABP_VERDICT_NONZERO);

  size_t needed = 0;
  CHECK(roabp_instance_serialize(inst, NULL, 0, &needed) == ROABP_STATUS_BUFFER_TOO_SMALL);
  char *text = malloc(needed);
  CHECK(roabp_instance_serialize(inst, text, needed, &needed) == ROABP_STATUS_OK);
  CHECK(strcmp(text, SUM) == 0);
  free(text);

  uint64_t bound = 0;
  CHECK(roabp_degree_bound(4, 2, 2, &bound) == ROABP_STATUS_OK && bound == 32);
  CHECK(roabp_hitting_set(10007, 4, 2, 2, NULL, 0, &needed) == ROABP_STATUS_BUFFER_TOO_SMALL);
  CHECK(needed == 33 * 4);

  CHECK(roabp_instance_eval(inst, point, 1, &value) == ROABP_STATUS_SHAPE);
  roabp_instance_free(inst);
  printf("ok %s\n", roabp_version());
  return 0;
}
