#ifndef GALRING_GALRING_HPP
#define GALRING_GALRING_HPP

#include "error.hpp"
#include "modular.hpp"
#include "ring.hpp"
#include "cyclotomic.hpp"
#include "char_sums.hpp"
#include "config_count.hpp"
#include "magnitude.hpp"
#include "bounds.hpp"
#include "io.hpp"
#include "sampling.hpp"
#include "suites.hpp"

#endif  // GALRING_GALRING_HPP
