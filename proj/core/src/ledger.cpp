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

#include "clockex/ledger.hpp"

#include "clockex/errors.hpp"

namespace clockex {

Ledger::Ledger(const std::string& path) : out_(nullptr) {
  {
    std::ifstream existing(path);
    std::string line;
    while (std::getline(existing, line)) {
      if (!line.empty()) ++next_seq_;
    }
  }
  file_.open(path, std::ios::app);
  if (!file_) throw Error(ErrorCode::kIo, "cannot open ledger " + path);
  out_ = &file_;
}

std::uint64_t Ledger::append(std::string_view event, Timestamp ts, nlohmann::json payload) {
  std::lock_guard lock(mu_);
  const std::uint64_t seq = next_seq_++;
  nlohmann::json record = {{"seq", seq},
                           {"ts", ts.time_since_epoch().count()},
                           {"event", std::string(event)},
                           {"payload", std::move(payload)}};
  *out_ << record.dump() << '\n';
  out_->flush();
  return seq;
}

std::uint64_t Ledger::size() const {
  std::lock_guard lock(mu_);
  return next_seq_ - 1;
}

}  // namespace clockex
