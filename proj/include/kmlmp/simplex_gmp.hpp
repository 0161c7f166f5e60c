#ifndef KMLMP_SIMPLEX_GMP_HPP
#define KMLMP_SIMPLEX_GMP_HPP

#include <gmpxx.h>

#include "kmlmp/simplex.hpp"

namespace kmlmp {

template <>
struct SimplexTraits<mpq_class> {
    static mpq_class eps() { return mpq_class(0); }
    static bool exact() { return true; }
};

}  // namespace kmlmp

#endif  // KMLMP_SIMPLEX_GMP_HPP
