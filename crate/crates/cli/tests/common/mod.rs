#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub const BOB_TABLE: &str = "\
# Bob's correction; C and D report Z outcomes
bell  C D  correction
Psi+  0 0  I
Psi+  0 1  XZ
Psi+  1 0  X
Psi+  1 1  Z
Psi-  0 0  Z
Psi-  0 1  X
Psi-  1 0  XZ
Psi-  1 1  I
Phi+  0 0  X
Phi+  0 1  Z
Phi+  1 0  I
Phi+  1 1  XZ
Phi-  0 0  XZ
Phi-  0 1  I
Phi-  1 0  Z
Phi-  1 1  X
";

pub const DIANA_ZZ_TABLE: &str = "\
# Diana's correction; B and C report Z outcomes
bell  B,C   correction
Psi+  same  I
Psi+  diff  XZ
Psi-  same  Z
Psi-  diff  X
Phi+  same  X
Phi+  diff  Z
Phi-  same  XZ
Phi-  diff  I
";

pub const DIANA_X_TABLE: &str = "\
# Diana's correction; one of B or C reports an X outcome
bell  x  correction
Psi+  +  XH
Psi+  -  ZH
Psi-  +  XZH
Psi-  -  H
Phi+  +  H
Phi+  -  XZH
Phi-  +  ZH
Phi-  -  XH
";

pub fn hqis<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_hqis"))
        .args(args)
        .output()
        .expect("hqis binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Run `args` with `--json <dir>/<name>` and return the file's bytes.
pub fn json_bytes(dir: &Path, name: &str, args: &[&str]) -> (Output, Vec<u8>) {
    let path = dir.join(name);
    let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    full.push("--json".into());
    full.push(path.display().to_string());
    let out = hqis(&full);
    let bytes = std::fs::read(&path).unwrap_or_default();
    (out, bytes)
}
