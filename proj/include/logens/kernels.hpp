#pragma once

#include <vector>

#include "logens/dataset.hpp"
#include "logens/matrix.hpp"
#include "logens/model.hpp"

namespace logens {

// Batch kernels over a dataset. The serial versions are the reference; the
// OpenMP versions parallelize over samples and then reduce in sample order,
// so both produce bit-identical results for any thread count.
enum class Execution { serial, parallel };

namespace serial {
double batch_cost(const EnsembleModel& model, const Dataset& data);
Matrix batch_gradient(const EnsembleModel& model, const Dataset& data);
std::vector<double> class1_scores(const EnsembleModel& model, const Matrix& features);
}  // namespace serial

namespace omp {
double batch_cost(const EnsembleModel& model, const Dataset& data);
Matrix batch_gradient(const EnsembleModel& model, const Dataset& data);
std::vector<double> class1_scores(const EnsembleModel& model, const Matrix& features);
}  // namespace omp

std::vector<double> class1_scores(const EnsembleModel& model, const Matrix& features,
                                  Execution exec = Execution::parallel);

}  // namespace logens
