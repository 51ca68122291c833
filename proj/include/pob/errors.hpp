#pragma once

#include <stdexcept>
#include <string>

namespace pob {

// Base class for all toolkit errors. Subclasses map onto CLI exit codes:
// everything except io_error is a usage/validation failure (exit 1),
// io_error is a filesystem/decoding failure (exit 2).
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

class parse_error : public error {
 public:
  explicit parse_error(const std::string& what) : error(what) {}
};

class validation_error : public error {
 public:
  explicit validation_error(const std::string& what) : error(what) {}
};

class lookup_error : public error {
 public:
  explicit lookup_error(const std::string& what) : error(what) {}
};

class parameter_error : public error {
 public:
  explicit parameter_error(const std::string& what) : error(what) {}
};

class policy_error : public error {
 public:
  explicit policy_error(const std::string& what) : error(what) {}
};

class io_error : public error {
 public:
  explicit io_error(const std::string& what) : error(what) {}
};

}  // namespace pob
