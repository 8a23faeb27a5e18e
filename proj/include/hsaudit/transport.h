/* Copyright 2026 The hsaudit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef HSAUDIT_TRANSPORT_H_
#define HSAUDIT_TRANSPORT_H_

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace hsaudit {

struct HttpRequest {
  std::string url;  // absolute, e.g. http://127.0.0.1:8000/v1/score?key=...
  std::string body;
  std::map<std::string, std::string> headers;
};

struct HttpResponse {
  // 0 means the request never produced a response (connect/read failure).
  int status = 0;
  std::string body;
  std::string transport_error;
};

// Every outbound call goes through this interface so that offline runs and
// tests can substitute a transport that never touches the network.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse PostJson(const HttpRequest& request) = 0;
};

// cpp-httplib backed client. Thread-safe: each call opens its own client.
class NetworkTransport : public HttpTransport {
 public:
  explicit NetworkTransport(std::chrono::seconds timeout = std::chrono::seconds(60))
      : timeout_(timeout) {}
  HttpResponse PostJson(const HttpRequest& request) override;

 private:
  std::chrono::seconds timeout_;
};

// Refuses every request and counts the attempts. Used for --offline.
class OfflineTransport : public HttpTransport {
 public:
  HttpResponse PostJson(const HttpRequest& request) override;
  int attempts() const { return attempts_.load(); }

 private:
  std::atomic<int> attempts_{0};
};

// Records requests and answers from a handler; for tests.
class RecordingTransport : public HttpTransport {
 public:
  using Handler = std::function<HttpResponse(const HttpRequest&)>;
  explicit RecordingTransport(Handler handler) : handler_(std::move(handler)) {}

  HttpResponse PostJson(const HttpRequest& request) override;
  std::vector<HttpRequest> requests() const;
  std::size_t call_count() const;

 private:
  Handler handler_;
  mutable std::mutex mu_;
  std::vector<HttpRequest> requests_;
};

struct ParsedUrl {
  std::string scheme_host_port;  // "http://host:port"
  std::string path_and_query;    // "/v1/score?x=y"
};
ParsedUrl SplitUrl(const std::string& url);

// Joins an endpoint base ("http://h:1/", "http://h:1") with a path ("/v1/nli").
std::string JoinUrl(const std::string& base, const std::string& path);

}  // namespace hsaudit

#endif  // HSAUDIT_TRANSPORT_H_
