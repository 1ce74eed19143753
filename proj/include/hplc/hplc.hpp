#ifndef HPLC_HPLC_HPP
#define HPLC_HPLC_HPP

#include "hplc/errors.hpp"
#include "hplc/specfun.hpp"
#include "hplc/channel.hpp"
#include "hplc/capacity.hpp"
#include "hplc/config.hpp"
#include "hplc/experiments.hpp"

#endif  // HPLC_HPLC_HPP
