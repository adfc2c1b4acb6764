// Copyright 2026 The clockex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "clockex/exchange.hpp"

namespace clockex {

// Append-only event log, one JSON record per line:
//   {"event": ..., "payload": {...}, "seq": n, "ts": <ms since epoch>}
class Ledger {
 public:
  // Writes to a caller-owned stream.
  explicit Ledger(std::ostream& out) : out_(&out) {}
  // Opens `path` for appending. Throws kIo.
  explicit Ledger(const std::string& path);

  // Returns the sequence number given to the record.
  std::uint64_t append(std::string_view event, Timestamp ts, nlohmann::json payload);

  std::uint64_t size() const;

 private:
  std::ofstream file_;
  std::ostream* out_;
  mutable std::mutex mu_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace clockex
