#pragma once

#include <stdexcept>

namespace satdyn {

// Thrown when an iterative scheme fails to converge or an integration
// budget is exhausted. Domain violations use std::domain_error.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace satdyn
