//! Job-file front end for `tqftkit-core`: TOML jobs in, JSON results out.

pub mod job;
pub mod run;

pub use job::{parse_job, Command, JobError, JobSpec};
pub use run::{run_job, RunOptions};

use serde_json::{json, Value};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

/// Parses and runs a job file, returning the JSON document to print and the
/// exit code.
pub fn execute(text: &str, opts: RunOptions) -> (Value, i32) {
    let job = match parse_job(text) {
        Ok(j) => j,
        Err(e) => {
            let doc = json!({
                "error": { "code": e.code(), "message": e.to_string(), "issues": e.issues() },
                "input_sha256": job::sha256_hex(text),
                "version": tqftkit_core::VERSION,
            });
            return (doc, EXIT_PARSE);
        }
    };
    match run_job(&job, opts) {
        Ok(doc) => (doc, EXIT_OK),
        Err(e) => {
            let doc = json!({
                "command": job.command.name(),
                "error": { "code": e.code(), "message": e.to_string() },
                "input_sha256": job.input_sha256,
                "version": tqftkit_core::VERSION,
            });
            (doc, EXIT_DOMAIN)
        }
    }
}

/// Renders `v` with `indent` spaces per level; `0` gives one compact line.
pub fn render(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return serde_json::to_string(v).expect("serializable");
    }
    let pad = vec![b' '; indent];
    let mut buf = Vec::new();
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    serde::Serialize::serialize(v, &mut ser).expect("serializable");
    String::from_utf8(buf).expect("JSON is UTF-8")
}
