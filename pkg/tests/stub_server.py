"""In-process HTTP stub implementing the victim/filler wire protocol.

Records raw request bodies so tests can assert bit-exact client
serialization and export fixtures for bridge conformance replay.
"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class StubHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        server = self.server
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length)
        with server.lock:
            server.requests.append((self.path, raw, dict(self.headers)))
        behavior = server.behaviors.get(self.path, {})
        delay = behavior.get("delay", 0)
        if delay:
            import time

            time.sleep(delay)
        status = behavior.get("status", 200)
        if callable(behavior.get("body")):
            body = behavior["body"](json.loads(raw or b"{}"))
        else:
            body = behavior.get("body", {})
        payload = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, fmt, *args):  # silence
        pass


class StubServer:
    def __init__(self):
        self.httpd = ThreadingHTTPServer(("127.0.0.1", 0), StubHandler)
        self.httpd.requests = []
        self.httpd.behaviors = {}
        self.httpd.lock = threading.Lock()
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    @property
    def requests(self):
        return self.httpd.requests

    def set(self, path: str, **behavior):
        self.httpd.behaviors[path] = behavior

    @property
    def url(self) -> str:
        host, port = self.httpd.server_address
        return f"http://{host}:{port}"

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.httpd.shutdown()
        self.httpd.server_close()
