#![allow(dead_code)]

use std::io::Write;
use std::os::unix::fs::PermissionsExt;
use std::path::PathBuf;

/// Two-sided one-sample Kolmogorov–Smirnov statistic against `cdf`.
pub fn ks_statistic(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            let hi = (i + 1) as f64 / n - f;
            let lo = f - i as f64 / n;
            hi.max(lo)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic critical value at significance 0.01.
pub fn ks_critical_001(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Writes an executable shell script and returns its path.
pub fn script(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(body.as_bytes()).unwrap();
    drop(f);
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

/// Adapter serving sign(v[0] - 0.5), boundary mapped to +1.
pub const AXIS_ADAPTER: &str = r#"#!/bin/sh
# mawk buffers piped input unless told otherwise.
if awk -W version 2>&1 | grep -q mawk; then set -- -W interactive; fi
exec awk "$@" '
/^GS1 [0-9]+$/ { print "OK 2"; fflush(); next }
/^QUIT$/ { exit 0 }
/^P [0-9]+$/ {
    m = $2; out = ""
    for (i = 0; i < m; i++) {
        getline line
        split(line, a, " ")
        l = (a[1] - 0.5 >= 0) ? 1 : -1
        out = (i ? out " " : "") l
    }
    print out; fflush(); next
}
{ exit 3 }'
"#;
