// Copyright 2026 The secagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace secagg {

enum class Errc {
  Parameter,
  NonInvertible,
  // curve validation
  FieldNotPrime,
  BadFieldTag,
  CoefficientRange,
  SingularCurve,
  BaseOffCurve,
  CompositeOrder,
  BadBaseOrder,
  BadCofactor,
  OffCurve,
  InfinityHasNoX,
  // Okamoto-Uchiyama
  PlaintextOutOfRange,
  MalformedCiphertext,
  // signatures
  DegenerateSignature,
  DegenerateAggregate,
  DegenerateKeySum,
  // protocol
  ReadingOutOfRange,
  EpochAbort,
  EpochMismatch,
  DuplicateContributor,
  CapacityExceeded,
  UnknownContributor,
  RoleMismatch,
  // wire decoding
  Truncated,
  UnsupportedVersion,
  TrailingBytes,
  BadContributorList,
  BadCiphertext,
  BadSignatureScalar,
  BadPointEncoding,
  // files and scenarios
  Config,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::Parameter: return "ParameterError";
    case Errc::NonInvertible: return "NonInvertible";
    case Errc::FieldNotPrime: return "FieldNotPrime";
    case Errc::BadFieldTag: return "BadFieldTag";
    case Errc::CoefficientRange: return "CoefficientRange";
    case Errc::SingularCurve: return "SingularCurve";
    case Errc::BaseOffCurve: return "BaseOffCurve";
    case Errc::CompositeOrder: return "CompositeOrder";
    case Errc::BadBaseOrder: return "BadBaseOrder";
    case Errc::BadCofactor: return "BadCofactor";
    case Errc::OffCurve: return "OffCurve";
    case Errc::InfinityHasNoX: return "InfinityHasNoX";
    case Errc::PlaintextOutOfRange: return "PlaintextOutOfRange";
    case Errc::MalformedCiphertext: return "MalformedCiphertext";
    case Errc::DegenerateSignature: return "DegenerateSignature";
    case Errc::DegenerateAggregate: return "DegenerateAggregate";
    case Errc::DegenerateKeySum: return "DegenerateKeySum";
    case Errc::ReadingOutOfRange: return "ReadingOutOfRange";
    case Errc::EpochAbort: return "EpochAbort";
    case Errc::EpochMismatch: return "EpochMismatch";
    case Errc::DuplicateContributor: return "DuplicateContributor";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::UnknownContributor: return "UnknownContributor";
    case Errc::RoleMismatch: return "RoleMismatch";
    case Errc::Truncated: return "Truncated";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::TrailingBytes: return "TrailingBytes";
    case Errc::BadContributorList: return "BadContributorList";
    case Errc::BadCiphertext: return "BadCiphertext";
    case Errc::BadSignatureScalar: return "BadSignatureScalar";
    case Errc::BadPointEncoding: return "BadPointEncoding";
    case Errc::Config: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace secagg
