#include <doctest.h>

#include <omp.h>

#include "logens/gradient.hpp"
#include "logens/kernels.hpp"
#include "logens/verify.hpp"

using namespace logens;

TEST_SUITE("kernels") {

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  const int saved = omp_get_max_threads();
  for (int n = 1; n <= 5; ++n) {
    const auto problem = make_random_problem(n, 6, 257, 31 + n);
    const double c = serial::batch_cost(problem.model, problem.data);
    const Matrix g = serial::batch_gradient(problem.model, problem.data);
    const auto s = serial::class1_scores(problem.model, problem.data.features);
    for (int threads : {1, 2, 3, 7}) {
      omp_set_num_threads(threads);
      CAPTURE(threads);
      CHECK(omp::batch_cost(problem.model, problem.data) == c);
      CHECK(omp::batch_gradient(problem.model, problem.data) == g);
      CHECK(omp::class1_scores(problem.model, problem.data.features) == s);
    }
  }
  omp_set_num_threads(saved);
}

TEST_CASE("dispatch follows the execution flag") {
  const auto problem = make_random_problem(3, 4, 40, 5);
  CHECK(cost(problem.model, problem.data, Execution::serial) ==
        serial::batch_cost(problem.model, problem.data));
  CHECK(batch_gradient(problem.model, problem.data, Execution::parallel) ==
        omp::batch_gradient(problem.model, problem.data));
  CHECK(class1_scores(problem.model, problem.data.features, Execution::serial) ==
        serial::class1_scores(problem.model, problem.data.features));
}

TEST_CASE("errors inside parallel regions surface to the caller") {
  const auto problem = make_random_problem(2, 4, 10, 5);
  const EnsembleModel wrong(2, 3);
  CHECK_THROWS_AS(omp::batch_gradient(wrong, problem.data), std::invalid_argument);
  CHECK_THROWS_AS(omp::class1_scores(wrong, problem.data.features), std::invalid_argument);
  CHECK_THROWS_AS(serial::batch_cost(wrong, problem.data), std::invalid_argument);
}

}  // TEST_SUITE
