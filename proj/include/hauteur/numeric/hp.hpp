#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace hauteur {

// 50-digit binary floating point used by the extended-precision paths.
using HpReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;
using HpComplex =
    boost::multiprecision::number<boost::multiprecision::complex_adaptor<boost::multiprecision::cpp_bin_float<50>>,
                                  boost::multiprecision::et_off>;

inline bool is_zero(const HpComplex& x) { return x == HpComplex(0); }

}  // namespace hauteur
