use std::process::Command;

fn main() {
    println!("cargo:rerun-if-env-changed=RAO_FUSION_GIT_DESCRIBE");
    println!("cargo:rerun-if-changed=../../.git/HEAD");
    println!("cargo:rerun-if-changed=../../.git/index");
    let describe = std::env::var("RAO_FUSION_GIT_DESCRIBE").ok().or_else(|| {
        Command::new("git")
            .args(["describe", "--always", "--dirty", "--tags"])
            .output()
            .ok()
            .filter(|o| o.status.success())
            .and_then(|o| String::from_utf8(o.stdout).ok())
            .map(|s| s.trim().to_owned())
            .filter(|s| !s.is_empty())
    });
    println!(
        "cargo:rustc-env=RAO_FUSION_BUILD_DESCRIBE={}",
        describe.unwrap_or_else(|| "unknown".into())
    );
}
