/* The public header must compile as plain C. */
#include "lslrr/lslrr.h"

int main(void) {
  lslrr_config cfg;
  lslrr_config_default(&cfg);
  return lslrr_config_validate(&cfg) == LSLRR_OK ? 0 : 1;
}
