// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace gfk {

enum class Errc {
  EmptyStream,
  RangeParse,
  MalformedIpPrefix,
  MissingTotals,
  DelegationExceedsIssuer,
  ExpiredIssuer,
  ExpiredCertificate,
  ScopeExceedsAuthorization,
  ScopeContainsMalformedLine,
  EmptyScope,
  TargetOutOfRange,
  UnknownCertificate,
  SourceUnavailable,
  ParseError,
  IoError,
  InvalidArgument,
};

std::string_view errc_name(Errc code);

struct Error {
  Errc code;
  std::string message;
};

/// Value-or-error carrier for operations whose failures the caller branches on.
template <typename T>
class Result {
 public:
  Result(T value) : value_(std::move(value)) {}
  Result(Error error) : error_(std::move(error)) {}
  Result(Errc code, std::string message) : error_(Error{code, std::move(message)}) {}

  bool ok() const { return value_.has_value(); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    assert(ok());
    return *value_;
  }
  T& value() & {
    assert(ok());
    return *value_;
  }
  T&& take() && {
    assert(ok());
    return std::move(*value_);
  }

  const Error& error() const {
    assert(!ok());
    return *error_;
  }

 private:
  std::optional<T> value_;
  std::optional<Error> error_;
};

template <>
class Result<void> {
 public:
  Result() = default;
  Result(Error error) : error_(std::move(error)) {}
  Result(Errc code, std::string message) : error_(Error{code, std::move(message)}) {}

  bool ok() const { return !error_.has_value(); }
  explicit operator bool() const { return ok(); }

  const Error& error() const {
    assert(!ok());
    return *error_;
  }

 private:
  std::optional<Error> error_;
};

}  // namespace gfk
