//! Release-gate check c9 (the rest of the numbered suite lives with the
//! library): a fixed sweep config run twice with four worker threads must
//! produce byte-identical output — no floating-point reduction-order drift,
//! no map-iteration-order leakage, no timestamps.

use std::process::Command;

#[test]
fn c9_determinism() {
    let bin = env!("CARGO_BIN_EXE_polyprime");
    let args = [
        "sweep",
        "--poly",
        "x^2+1",
        "--n",
        "100:100000:10",
        "--threads",
        "4",
    ];
    let run_once = || {
        let out = Command::new(bin).args(args).output().expect("binary spawns");
        assert!(
            out.status.success(),
            "sweep failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let first = run_once();
    let second = run_once();

    let pass = first == second && first.len() > 100;
    println!("acceptance c9 determinism: {}", if pass { "PASS" } else { "FAIL" });
    assert!(
        pass,
        "reruns differ:\n--- first ---\n{}\n--- second ---\n{}",
        String::from_utf8_lossy(&first),
        String::from_utf8_lossy(&second)
    );
}
