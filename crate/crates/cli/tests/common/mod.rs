#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::Path;
use std::process::{Child, Command, Output, Stdio};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewroute"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("SKEWROUTE_LISTEN").output().expect("spawn skewroute")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// A `skewroute serve` child, killed on drop.
pub struct Server {
    child: Child,
    pub addr: String,
}

impl Server {
    pub fn start(args: &[&str], env_listen: Option<&str>) -> Server {
        let mut cmd = bin();
        cmd.arg("serve").args(args).stdout(Stdio::null()).stderr(Stdio::piped());
        match env_listen {
            Some(v) => cmd.env("SKEWROUTE_LISTEN", v),
            None => cmd.env_remove("SKEWROUTE_LISTEN"),
        };
        let mut child = cmd.spawn().expect("spawn server");
        let mut reader = BufReader::new(child.stderr.take().unwrap());
        let mut addr = None;
        for line in reader.by_ref().lines() {
            let line = line.unwrap();
            if let Some(a) = line.strip_prefix("listening on ") {
                addr = Some(a.trim().to_string());
                break;
            }
        }
        let Some(addr) = addr else {
            let _ = child.kill();
            panic!("server exited before listening");
        };
        Server { child, addr }
    }

    pub fn request(&self, method: &str, path: &str, body: &str) -> (u16, String) {
        http(&self.addr, method, path, body)
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// One HTTP/1.1 request on a fresh connection.
pub fn http(addr: &str, method: &str, path: &str, body: &str) -> (u16, String) {
    let mut s = TcpStream::connect(addr).expect("connect");
    write!(
        s,
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut raw = String::new();
    s.read_to_string(&mut raw).unwrap();
    let (head, body) = raw.split_once("\r\n\r\n").expect("http response");
    let status = head.split_whitespace().nth(1).and_then(|c| c.parse().ok()).expect("status code");
    (status, body.to_string())
}
