use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_profwords")).args(args).output().expect("binary runs")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn golden(name: &str, args: &[&str]) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    let want = std::fs::read_to_string(&path).expect("golden file");
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{name}");
}

const FIB: &str = "a->ab;b->a";
const AC: &str = "a->ab;b->aaab";
const A5_IMAGES: &str = "a:(1 2 3);b:(3 4 5)";

#[test]
fn fibonacci_returns_to_b() {
    golden("returns_fibonacci_b.json", &["returns", "--subst", FIB, "--start", "a", "--word", "b"]);
    let v = stdout_json(&["returns", "--subst", FIB, "--start", "a", "--word", "b"]);
    assert_eq!(v, serde_json::json!({ "right": ["ab", "aab"] }));
}

#[test]
fn fibonacci_is_a_tree_set() {
    golden("classify_fibonacci.json", &["classify", "--subst", FIB, "--start", "a", "--maxlen", "6"]);
    let v = stdout_json(&["classify", "--subst", FIB, "--start", "a", "--maxlen", "6"]);
    assert_eq!(v["tree"], true);
}

#[test]
fn ac_h_order_in_a5() {
    golden("horder_ac_a5.json", &["horder", "--subst", AC, "--group", "A5", "--images", A5_IMAGES]);
    let out = run(&["horder", "--subst", AC, "--group", "A5", "--images", A5_IMAGES, "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "12\n");
}

#[test]
fn thue_morse_returns_and_connexion() {
    golden(
        "returns_thue_morse_aa.json",
        &["returns", "--subst", "tm", "--word", "aa", "--side", "both", "--connexion", "aa"],
    );
}

#[test]
fn ac_group_code() {
    golden("bifix_ac_a5.json", &["bifix", "--subst", AC, "--group", "A5", "--images", A5_IMAGES]);
}

#[test]
fn parity_code_minimal_class() {
    golden("monoid_parity_fibonacci.json", &["monoid", "--code", "aa,ab,ba", "--subst", "fib"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let jobs: [&[&str]; 4] = [
        &["bifix", "--subst", AC, "--group", "A5", "--images", A5_IMAGES],
        &["monoid", "--code", "aa,ab,ba", "--subst", "fib", "--eggbox"],
        &["classify", "--subst", "trib", "--maxlen", "5", "--records"],
        &["shadow", "--beta", "a,ab,bb", "--psi-images", "x:1;y:0;z:0", "--u", "xz", "--v", "yz", "--seed", "3"],
    ];
    for args in jobs {
        let first = run(args);
        assert!(first.status.success(), "{args:?}");
        for _ in 0..2 {
            assert_eq!(run(args).stdout, first.stdout, "{args:?}");
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["returns", "--subst", FIB, "--word", "c"]).status.code(), Some(2));
    assert_eq!(run(&["returns", "--subst", "a->ab;b->", "--word", "a"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["factors", "--subst", FIB, "--horizon", "100"]).status.code(), Some(3));
    assert_eq!(run(&["monoid", "--code", "aa,ab,ba", "--budget-monoid", "4"]).status.code(), Some(3));
    assert_eq!(
        run(&["horder", "--subst", "tm", "--group", "A5", "--images", "a:(1 2);b:(3 4 5)"]).status.code(),
        Some(1)
    );
}

#[test]
fn dot_output() {
    let dir = std::env::temp_dir().join(format!("profwords-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trie.dot");
    let out = run(&["bifix", "--subst", "fib", "--code", "aa,ab,ba", "--dot", path.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    let printed = run(&["bifix", "--subst", "fib", "--code", "aa,ab,ba", "--format", "dot"]);
    assert_eq!(String::from_utf8(printed.stdout).unwrap(), dot);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn other_commands() {
    let v = stdout_json(&["shadow", "--expr", "subst^w(fib,a)", "--group", "A5", "--images", A5_IMAGES]);
    assert_eq!(v["value"]["idempotent"], false);
    let v = stdout_json(&["arith", "--x", "100", "--precision", "5"]);
    assert_eq!(v["factorial_digits"]["digits"], serde_json::json!([0, 2, 0, 4, 0]));
    let v = stdout_json(&["arith", "--modulus", "6", "--fib-factorial", "4"]);
    assert_eq!(v["pisano_period"], 24);
    assert_eq!(v["fib_factorial"], 0);
    let v = stdout_json(&["freegroup", "--gens", "aa,ab,ba", "--member", "ba^-1"]);
    assert_eq!(v["index"], 2);
    assert_eq!(v["member"], true);
    let v = stdout_json(&["episturmian", "--directive", "ab", "--depth", "4", "--returns", "b"]);
    assert_eq!(v["left_returns"], serde_json::json!(["ba", "baa"]));
    let v = stdout_json(&["subst", "--subst", "fib", "--iterate", "4"]);
    assert_eq!(v["iterate"], "abaababa");
}
