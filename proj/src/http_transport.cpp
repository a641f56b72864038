// Copyright 2026 The Asymsim Authors.
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

#include <string>

#include "asymsim/backend.hpp"
#include "httplib.h"

namespace asymsim {

namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post_json(const std::string& url,
                         const std::vector<std::pair<std::string, std::string>>& headers,
                         const std::string& body, int64_t timeout_ms) override {
    HttpResponse out;
    size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      out.error = "endpoint must include a scheme: " + url;
      return out;
    }
    size_t path_start = url.find('/', scheme_end + 3);
    std::string origin = url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    auto secs = static_cast<time_t>(timeout_ms / 1000);
    auto usecs = static_cast<time_t>((timeout_ms % 1000) * 1000);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers hdrs;
    for (const auto& [k, v] : headers) hdrs.emplace(k, v);
    auto result = client.Post(path, hdrs, body, "application/json");
    if (!result) {
      out.error = httplib::to_string(result.error());
      out.timed_out = result.error() == httplib::Error::ConnectionTimeout ||
                      result.error() == httplib::Error::Read;
      return out;
    }
    out.status = result->status;
    out.body = result->body;
    return out;
  }
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport() {
  return std::make_unique<HttplibTransport>();
}

}  // namespace asymsim
