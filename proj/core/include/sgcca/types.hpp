#pragma once

#include <Eigen/Core>
#include <string_view>

namespace sgcca {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Constraint-set variant for the coefficient vectors:
//   P1: ||x||_1 <= t, ||x||_2 <= 1   (ball / ball)
//   P2: ||x||_1  = t, ||x||_2  = 1   (sphere / sphere)
//   P3: ||x||_1 <= t, ||x||_2  = 1   (ball / sphere)
enum class Variant { P1, P2, P3 };

std::string_view variant_name(Variant variant);
Variant variant_from_name(std::string_view name);

}  // namespace sgcca
