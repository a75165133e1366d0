#pragma once

#include <stdexcept>
#include <string>

namespace mimo_ee {

//! K x K Gram matrix of the selected sub-channel is too ill-conditioned to invert.
class SingularChannel : public std::runtime_error
{
public:
  explicit SingularChannel(const std::string& what) : std::runtime_error(what) {}
};

//! Closed-form expression evaluated with F <= K, where users cannot be served.
class DegenerateF : public std::domain_error
{
public:
  explicit DegenerateF(const std::string& what) : std::domain_error(what) {}
};

class QuadratureFailure : public std::runtime_error
{
public:
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

class NonPositivePower : public std::domain_error
{
public:
  explicit NonPositivePower(const std::string& what) : std::domain_error(what) {}
};

class AllTrialsFailed : public std::runtime_error
{
public:
  explicit AllTrialsFailed(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mimo_ee
