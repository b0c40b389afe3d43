#pragma once

// In-process HTTP server on a free loopback port for client tests.

#include <atomic>
#include <functional>
#include <string>
#include <thread>

#include "httplib.h"

class StubServer {
public:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&, int call)>;

    explicit StubServer(Handler handler) : handler_(std::move(handler)) {
        server_.Post(".*", [this](const httplib::Request& req, httplib::Response& res) {
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            handler_(req, res, calls_++);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int calls() const { return calls_; }
    const std::string& last_body() const { return last_body_; }
    const std::string& last_auth() const { return last_auth_; }

private:
    Handler handler_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> calls_{0};
    std::string last_body_;
    std::string last_auth_;
};
