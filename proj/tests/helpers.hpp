#ifndef KREINSPEC_TEST_HELPERS_HPP
#define KREINSPEC_TEST_HELPERS_HPP

#include <cmath>

#include "kreinspec/krein.hpp"

namespace kreinspec::test {

inline double entry_gap(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).norm_fro();
}

// the recurring 2x2 fixtures
inline OperatorPair diag_pair() {
    return OperatorPair::create(ComplexMatrix{{2, 0}, {0, 3}}, ComplexMatrix{{1, 0}, {0, -1}});
}
inline OperatorPair nilpotent_pair() {
    return OperatorPair::create(ComplexMatrix{{1, 1}, {1, 1}}, ComplexMatrix{{1, 0}, {0, -1}});
}
inline OperatorPair rotation_pair() {
    return OperatorPair::create(ComplexMatrix{{0, 1}, {1, 0}}, ComplexMatrix{{1, 0}, {0, -1}});
}
inline OperatorPair identity_pair() {
    return OperatorPair::create(ComplexMatrix::identity(2), ComplexMatrix::identity(2));
}

}  // namespace kreinspec::test

#endif
