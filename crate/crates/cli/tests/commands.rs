use std::path::Path;
use std::process::{Command, Output};

fn strangeness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strangeness")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(&format!("{key}: ")))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const CIRCLE: &str = "circle c1 host outer coorient inward\n";

#[test]
fn embedded_circle_has_zero_st1() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.diagram", CIRCLE);
    let o = strangeness(&["curve-st1", &f]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "st1"), Some("0"));
}

#[test]
fn corrupt_file_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.diagram", "vertex v1 a b c\n");
    let o = strangeness(&["curve-st1", &f]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

fn gadget(dir: &Path, pattern: &str) -> (String, String, String) {
    let o = strangeness(&["generate", "--gadget", pattern, "--out", &dir.display().to_string()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let face = field(&stdout(&o), "face").unwrap().to_owned();
    (dir.join("before.diagram").display().to_string(), dir.join("after.diagram").display().to_string(), face)
}

#[test]
fn gadget_difference_at_j_one() {
    let dir = tempfile::tempdir().unwrap();
    let (before, after, _) = gadget(dir.path(), "out,in,in");
    let st = |f: &str| -> i64 { field(&stdout(&strangeness(&["curve-st1", f])), "st1").unwrap().parse().unwrap() };
    assert_eq!(st(&after) - st(&before), -1);
}

#[test]
fn curve_move_reports_type_and_change() {
    for (pattern, kind, dst1) in [("out,out,out", "strong", "3"), ("out,in,in", "weak", "-1")] {
        let dir = tempfile::tempdir().unwrap();
        let (before, _, face) = gadget(dir.path(), pattern);
        let o = strangeness(&["curve-move", &before, "--face", &face]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert_eq!(field(&out, "type"), Some(kind));
        assert_eq!(field(&out, "dst1"), Some(dst1));
        assert!(out.contains("after:"));
    }
}

#[test]
fn curve_move_on_non_triangle_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (before, _, face) = gadget(dir.path(), "in,in,in");
    let mut vs: Vec<&str> = face.split(',').collect();
    vs[2] = "nowhere";
    let o = strangeness(&["curve-move", &before, "--face", &vs.join(",")]);
    assert!(!o.status.success());
}

#[test]
fn sphere_movie_has_zero_st2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.movie", "movie closed\nbirth s1 host outer coorient outward\ndeath s1\n");
    let o = strangeness(&["movie-st2", &f]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "st2"), Some("0"));
}

#[test]
fn q_event_at_j_one_upward() {
    let o = strangeness(&["event-delta", "--event", "Q", "--pattern", "out,in,in,in", "--direction", "up"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let movie = &out[out.find("movie:").unwrap()..];
    let get = |k: &str| movie.lines().find_map(|l| l.trim().strip_prefix(&format!("{k}: "))).unwrap();
    assert_eq!(get("dst1"), "-1");
    assert_eq!(get("sgn"), "-1");
    assert_eq!(get("dst2"), "-2");
    assert_eq!(field(&out, "dst2"), Some("-2"));
}

#[test]
fn table_row_for_q4() {
    let o = strangeness(&["table", "--event", "Q4", "--format", "json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<i64> = out[out.find('[').unwrap() + 1..out.find(']').unwrap()]
        .split(',')
        .map(|s| s.trim().parse().unwrap())
        .collect();
    assert_eq!(row, vec![-4, -12, -12, -4]);
}

#[test]
fn verify_single_claim_passes() {
    let o = strangeness(&["verify", "--claim", "lemma-st1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("lemma-st1           16/16  pass"));
}

#[test]
fn verify_failing_claim_exits_nonzero() {
    let o = strangeness(&["verify", "--claim", "table1-H"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_writes_svg_or_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.diagram", CIRCLE);
    let out = dir.path().join("c.svg");
    let o = strangeness(&["render", &f, "--out", &out.display().to_string()]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches(r#"class="region""#).count(), 2);

    let bad = write(dir.path(), "bad.diagram", "circle c1 host circle:c9 coorient inward\n");
    let out2 = dir.path().join("bad.svg");
    let o = strangeness(&["render", &bad, "--out", &out2.display().to_string()]);
    assert!(!o.status.success());
    assert!(!out2.exists());
}

#[test]
fn reports_are_byte_stable() {
    let a = strangeness(&["event-delta", "--event", "T2", "--format", "json"]);
    let b = strangeness(&["event-delta", "--event", "T2", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
