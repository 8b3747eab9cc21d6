#include "sclink/convolution.hpp"

namespace sclink {

template Matrix<double> mimo_convolve_direct<double>(const Eigen::Ref<const Matrix<double>>&,
                                                     const MimoTaps<double>&);
template Matrix<cdouble> mimo_convolve_direct<cdouble>(const Eigen::Ref<const Matrix<cdouble>>&,
                                                       const MimoTaps<cdouble>&);
template Matrix<double> mimo_convolve_overlap_save<double>(const Eigen::Ref<const Matrix<double>>&,
                                                           const MimoTaps<double>&, Index);
template Matrix<cdouble> mimo_convolve_overlap_save<cdouble>(const Eigen::Ref<const Matrix<cdouble>>&,
                                                             const MimoTaps<cdouble>&, Index);

}  // namespace sclink
