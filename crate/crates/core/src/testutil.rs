//! Minimal HTTP stub server for provider unit tests.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

pub(crate) struct StubServer {
    addr: String,
    hits: Arc<AtomicUsize>,
    stop: Arc<AtomicBool>,
    handle: Option<std::thread::JoinHandle<()>>,
}

impl StubServer {
    /// Spawn a one-connection-at-a-time HTTP server. The handler maps a
    /// request body to (status, response body); responses are JSON.
    pub(crate) fn spawn<F>(mut handler: F) -> StubServer
    where
        F: FnMut(&str) -> (u16, String) + Send + 'static,
    {
        Self::spawn_with_headers(move |_headers, body| handler(body))
    }

    /// Like `spawn`, but the handler also sees the raw request headers.
    pub(crate) fn spawn_with_headers<F>(mut handler: F) -> StubServer
    where
        F: FnMut(&str, &str) -> (u16, String) + Send + 'static,
    {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = format!("http://{}", listener.local_addr().unwrap());
        let hits = Arc::new(AtomicUsize::new(0));
        let stop = Arc::new(AtomicBool::new(false));
        let (hits2, stop2) = (hits.clone(), stop.clone());

        let handle = std::thread::spawn(move || {
            for stream in listener.incoming() {
                if stop2.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(mut stream) = stream else { continue };
                let (headers, body) = match read_request(&mut stream) {
                    Some(parts) => parts,
                    None => continue,
                };
                hits2.fetch_add(1, Ordering::SeqCst);
                let (status, response) = handler(&headers, &body);
                let reason = if status == 200 { "OK" } else { "Error" };
                let message = format!(
                    "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{response}",
                    response.len(),
                );
                let _ = stream.write_all(message.as_bytes());
            }
        });

        StubServer {
            addr,
            hits,
            stop,
            handle: Some(handle),
        }
    }

    pub(crate) fn url(&self) -> &str {
        &self.addr
    }

    pub(crate) fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the blocked accept so the thread observes the stop flag.
        if let Some(raw) = self.addr.strip_prefix("http://") {
            let _ = TcpStream::connect(raw);
        }
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

fn read_request(stream: &mut TcpStream) -> Option<(String, String)> {
    let mut buf = Vec::new();
    let mut chunk = [0u8; 1024];
    let header_end = loop {
        let n = stream.read(&mut chunk).ok()?;
        if n == 0 {
            return None;
        }
        buf.extend_from_slice(&chunk[..n]);
        if let Some(pos) = find_header_end(&buf) {
            break pos;
        }
        if buf.len() > 1 << 20 {
            return None;
        }
    };

    let headers = String::from_utf8_lossy(&buf[..header_end]).into_owned();
    let content_length: usize = headers
        .to_lowercase()
        .lines()
        .find_map(|l| l.strip_prefix("content-length:"))
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0);

    let body_start = header_end + 4;
    while buf.len() < body_start + content_length {
        let n = stream.read(&mut chunk).ok()?;
        if n == 0 {
            break;
        }
        buf.extend_from_slice(&chunk[..n]);
    }
    let body = String::from_utf8_lossy(&buf[body_start..]).into_owned();
    Some((headers, body))
}

fn find_header_end(buf: &[u8]) -> Option<usize> {
    buf.windows(4).position(|w| w == b"\r\n\r\n")
}
