"""A tiny inference-service stub used to validate the HTTP backend."""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class StubHandler(BaseHTTPRequestHandler):
    server_version = "stub/1.0"

    def do_POST(self):
        length = int(self.headers.get("Content-Length", "0"))
        body = json.loads(self.rfile.read(length) or b"{}")
        state = self.server.state
        with state["lock"]:
            state["requests"].append((self.path, body))
            state["in_flight"] += 1
            state["max_in_flight"] = max(state["max_in_flight"], state["in_flight"])
        try:
            if state["fail_next"] > 0:
                state["fail_next"] -= 1
                self.send_response(500)
                self.end_headers()
                return
            time.sleep(state["latency"])
            payload = json.dumps(
                {"output": "ECHO " + json.dumps(body["inputs"], sort_keys=True)}
            ).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
        finally:
            with state["lock"]:
                state["in_flight"] -= 1

    def log_message(self, *args):
        pass


def start_stub_server() -> ThreadingHTTPServer:
    server = ThreadingHTTPServer(("127.0.0.1", 0), StubHandler)
    server.state = {
        "lock": threading.Lock(),
        "requests": [],
        "fail_next": 0,
        "latency": 0.0,
        "in_flight": 0,
        "max_in_flight": 0,
    }
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    server.stub_thread = thread
    return server


def stop_stub_server(server: ThreadingHTTPServer) -> None:
    server.shutdown()
    server.stub_thread.join(timeout=2)
