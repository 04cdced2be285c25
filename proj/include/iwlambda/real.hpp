#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace iwlambda {

// 50 significant digits for every rho / pentagonal evaluation.
using Real = boost::multiprecision::cpp_dec_float_50;

}  // namespace iwlambda
