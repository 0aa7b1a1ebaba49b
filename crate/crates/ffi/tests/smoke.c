#include <stdio.h>
#include <string.h>

#include "tournament_linkage.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      const char *msg = tl_last_error_message();                      \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,          \
              msg ? msg : "no message");                              \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  TlDigraph *d = NULL;
  CHECK(tl_generate(TL_GENERATOR_NEAR_REGULAR, 251, 2, &d) == TL_STATUS_OK);
  CHECK(tl_digraph_order(d) == 251);

  size_t kappa = 0;
  TlDigraph *r = NULL;
  CHECK(tl_generate(TL_GENERATOR_ROTATIONAL, 9, 0, &r) == TL_STATUS_OK);
  CHECK(tl_vertex_connectivity(r, &kappa) == TL_STATUS_OK);
  CHECK(kappa == 4);
  tl_digraph_free(r);

  size_t xs[2] = {3, 250};
  size_t ys[2] = {100, 17};
  TlLinkage *l = NULL;
  CHECK(tl_link(d, xs, ys, 2, true, &l) == TL_STATUS_OK);
  CHECK(tl_linkage_path_count(l) == 2);
  CHECK(tl_linkage_verify(d, xs, ys, 2, l) == TL_STATUS_OK);
  for (size_t i = 0; i < 2; i++) {
    size_t len = tl_linkage_path_len(l, i);
    size_t buf[64];
    CHECK(len > 0 && len <= 64);
    CHECK(tl_linkage_path_copy(l, i, buf, 64) == TL_STATUS_OK);
    CHECK(buf[0] == xs[i] && buf[len - 1] == ys[i]);
  }
  tl_linkage_free(l);

  TlDigraph *bad = NULL;
  CHECK(tl_digraph_parse("2 1\n0 5\n", &bad) == TL_STATUS_PARSE);
  CHECK(bad == NULL);
  CHECK(strstr(tl_last_error_message(), "line 2") != NULL);

  tl_digraph_free(d);
  printf("ok %s\n", tl_version());
  return 0;
}
