// Copyright 2026 The histocr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <json.hpp>
#include <regex>

#include "histocr/client.hpp"

namespace histocr {

namespace {

bool is_content_filter_code(const nlohmann::json& code) {
  if (!code.is_string()) return false;
  const auto s = code.get<std::string>();
  return s == "content_filter" || s == "content_policy_violation" ||
         s == "ResponsibleAIPolicyViolation";
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendSettings settings) : settings_(std::move(settings)) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(settings_.endpoint, m, url)) {
    throw std::invalid_argument("endpoint must be an http(s) URL: '" + settings_.endpoint + "'");
  }
  if (settings_.model.empty()) throw std::invalid_argument("HTTP backend needs a model name");
  origin_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
}

BackendResult HttpBackend::interpret(int status, std::string_view body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (status == 200) {
    if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
      return BackendResult::transport("malformed completion response", false);
    }
    const auto& choice = j["choices"][0];
    if (choice.value("finish_reason", std::string()) == "content_filter") {
      return BackendResult::refusal("finish_reason content_filter");
    }
    const auto msg = choice.find("message");
    if (msg == choice.end() || !msg->contains("content") || !(*msg)["content"].is_string()) {
      return BackendResult::transport("completion has no message content", false);
    }
    return BackendResult::ok((*msg)["content"].get<std::string>());
  }
  if (!j.is_discarded() && j.contains("error") && j["error"].is_object()) {
    const auto& err = j["error"];
    const bool filtered =
        is_content_filter_code(err.value("code", nlohmann::json())) ||
        (err.contains("innererror") && err["innererror"].is_object() &&
         is_content_filter_code(err["innererror"].value("code", nlohmann::json())));
    if (filtered) return BackendResult::refusal(err.value("message", std::string("content filtered")));
  }
  const bool retryable = status == 408 || status == 429 || status >= 500;
  return BackendResult::transport("HTTP " + std::to_string(status), retryable);
}

BackendResult HttpBackend::complete(const CorrectionRequest& request) {
  httplib::Client client(origin_);
  const auto secs = static_cast<time_t>(settings_.timeout.count());
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);

  nlohmann::json body;
  body["model"] = settings_.model;
  body["temperature"] = settings_.temperature;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", std::string(request.prompt)}}});

  httplib::Headers headers;
  if (!settings_.api_key.empty()) {
    if (settings_.auth_header == "Authorization") {
      headers.emplace("Authorization", "Bearer " + settings_.api_key);
    } else {
      headers.emplace(settings_.auth_header, settings_.api_key);
    }
  }
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) return BackendResult::transport("connection failed: " + httplib::to_string(res.error()), true);
  return interpret(res->status, res->body);
}

}  // namespace histocr
