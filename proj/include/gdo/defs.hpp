#pragma once

#include <complex>

namespace gdo {

using Complex = std::complex<double>;

}  // namespace gdo
