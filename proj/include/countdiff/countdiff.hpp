#ifndef COUNTDIFF_COUNTDIFF_HPP
#define COUNTDIFF_COUNTDIFF_HPP

#include "counting.hpp"
#include "diffalg.hpp"
#include "diffcount.hpp"
#include "dimension.hpp"
#include "io.hpp"
#include "polynomial.hpp"
#include "sigma_system.hpp"
#include "thomas.hpp"

#endif // COUNTDIFF_COUNTDIFF_HPP
