/*
 * Copyright 2026 The PPDT Level-Site Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ppdt/harness/client.hpp"

#include "ppdt/errors.hpp"
#include "ppdt/levelsite/token.hpp"

namespace ppdt::harness {

using compare::SessionId;

Client::Client(wire::Network& net, he::ClientKeys keys) : net_(net), keys_(std::move(keys)) {}

Client::~Client() { Stop(); }

void Client::Start(const std::string& listen_endpoint) {
  listener_ = net_.Listen(listen_endpoint, [this](std::unique_ptr<wire::Connection> c) {
    HandleConnection(std::move(c));
  });
}

std::string Client::endpoint() const { return listener_ ? listener_->endpoint() : ""; }

void Client::Stop() {
  if (listener_) listener_->Stop();
}

bool Client::IsPending(const SessionId& session) {
  std::lock_guard lock(mu_);
  auto it = pending_.find(session);
  return it != pending_.end() && !it->second->settled;
}

void Client::Settle(const SessionId& session, std::uint64_t class_id) {
  std::lock_guard lock(mu_);
  auto it = pending_.find(session);
  if (it == pending_.end() || it->second->settled) return;
  it->second->settled = true;
  it->second->result.set_value(class_id);
}

void Client::Fail(const SessionId& session, const Error& error) {
  std::lock_guard lock(mu_);
  auto it = pending_.find(session);
  if (it == pending_.end() || it->second->settled) return;
  it->second->settled = true;
  it->second->result.set_exception(std::make_exception_ptr(error));
}

void Client::RunComparison(wire::Connection& conn, const compare::BlindedValueMsg& first) {
  compare::ClientComparison cmp(keys_);
  try {
    wire::WriteMessage(conn, cmp.OnBlindedValue(first));
    cmp.OnMaskedSequence(wire::Expect<compare::MaskedSequenceMsg>(conn));
    auto w = cmp.OnShareV(wire::Expect<compare::ShareVMsg>(conn));
    {
      std::lock_guard lock(mu_);
      auto it = pending_.find(first.session);
      if (it != pending_.end()) it->second->comparisons.push_back(cmp.counters());
    }
    wire::WriteMessage(conn, w);
  } catch (const Error& e) {
    cmp.Abort();
    Fail(first.session, e);
    try {
      wire::WriteMessage(conn, wire::ErrorMsg{first.session, e.code(), e.what()});
    } catch (const Error&) {
    }
  }
}

void Client::HandleConnection(std::unique_ptr<wire::Connection> conn) {
  wire::Message msg;
  try {
    msg = wire::ReadMessage(*conn);
  } catch (const Error&) {
    return;
  }
  if (auto* blinded = std::get_if<compare::BlindedValueMsg>(&msg)) {
    if (!IsPending(blinded->session)) {
      try {
        wire::WriteMessage(*conn, wire::ErrorMsg{blinded->session, ErrorCode::kProtocol,
                                                 "no pending query with this session"});
      } catch (const Error&) {
      }
      return;
    }
    RunComparison(*conn, *blinded);
  } else if (auto* result = std::get_if<wire::ResultMsg>(&msg)) {
    try {
      mpz_class m = keys_.paillier.private_key.Decrypt(result->enc_class);
      if (!m.fits_ulong_p()) throw Error(ErrorCode::kProtocol, "class id out of range");
      Settle(result->session, m.get_ui());
    } catch (const Error& e) {
      Fail(result->session, e);
    }
  } else if (auto* err = std::get_if<wire::ErrorMsg>(&msg)) {
    Fail(err->session, Error(err->code, "level-site error: " + err->text));
  }
}

ClientResult Client::Classify(const tree::FeatureVector& fv, const std::string& entry,
                              std::chrono::milliseconds timeout) {
  const int t = keys_.params.t;
  levelsite::TraversalToken token;
  token.session = compare::NewSessionId();
  token.client_endpoint = endpoint();
  const auto& pk = keys_.paillier.public_key;
  for (std::uint64_t x : fv) {
    if (t < 64 && (x >> t) != 0) {
      throw Error(ErrorCode::kRange, "feature value " + std::to_string(x) + " needs more than " +
                                         std::to_string(t) + " bits");
    }
    token.enc_features.push_back(pk.Encrypt(mpz_class(static_cast<unsigned long>(x))));
  }
  auto pending = std::make_shared<Pending>();
  auto future = pending->result.get_future();
  {
    std::lock_guard lock(mu_);
    pending_[token.session] = pending;
  }
  const SessionId session = token.session;
  auto cleanup = [&] {
    std::lock_guard lock(mu_);
    pending_.erase(session);
  };
  try {
    wire::SendOneShot(net_, entry, wire::ClassifyStartMsg{std::move(token)});
    if (future.wait_for(timeout) != std::future_status::ready) {
      throw Error(ErrorCode::kNetwork, "no result within the timeout");
    }
    ClientResult out;
    out.session = session;
    out.class_id = future.get();
    {
      std::lock_guard lock(mu_);
      out.comparisons = pending->comparisons;
    }
    cleanup();
    return out;
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace ppdt::harness
