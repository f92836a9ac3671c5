use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gbmr_core::calibration::qc_report_json;
use gbmr_session::resources::{parse_resource, violations};
use gbmr_session::{
    replay, transcript_jsonl, GestureLog, LogError, ResourceError, Resources, Server, ServerConfig,
    SessionConfig, SessionState, WorkflowKind,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "gbmr",
    version,
    about = "Gesture-driven fabrication session service"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Serve the WebSocket protocol, one session per connection.
    Serve {
        #[arg(long, default_value_t = 8765)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Workflow for clients whose hello names none.
        #[arg(long, default_value = "log_halving")]
        workflow: WorkflowKind,
        /// Catalog, job or cell file; repeatable.
        #[arg(long = "catalog")]
        catalogs: Vec<PathBuf>,
    },
    /// Fold a gesture log and write the transcript.
    Replay {
        file: PathBuf,
        /// Overrides the workflow named in the log header.
        #[arg(long)]
        workflow: Option<WorkflowKind>,
        #[arg(long = "catalog")]
        catalogs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the final session state.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },
    /// Check a catalog, job or cell file.
    ValidateCatalog { file: PathBuf },
    /// Write the toolpath held in a saved session state.
    ExportToolpath {
        state_file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the panel QC records held in a saved session state.
    ExportQc {
        state_file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

struct Failure {
    code: &'static str,
    message: String,
    exit: u8,
    details: Option<serde_json::Value>,
}

impl Failure {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        let exit = if code == "file_not_found" || code == "usage" {
            2
        } else {
            1
        };
        Self {
            code,
            message: message.into(),
            exit,
            details: None,
        }
    }

    fn report(&self) -> ExitCode {
        let mut error = json!({ "code": self.code, "message": self.message });
        if let Some(d) = &self.details {
            error["details"] = d.clone();
        }
        eprintln!("{}", json!({ "error": error }));
        ExitCode::from(self.exit)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Failure::new(
            "file_not_found",
            format!("file not found: {}", path.display()),
        ),
        _ => Failure::new("io", format!("{}: {e}", path.display())),
    })
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))
}

fn resource_failure(e: ResourceError) -> Failure {
    match e {
        ResourceError::NotFound(p) => {
            Failure::new("file_not_found", format!("file not found: {p}"))
        }
        ResourceError::Invalid(v) => Failure {
            details: serde_json::to_value(&v).ok(),
            ..Failure::new("invalid_catalog", ResourceError::Invalid(v).to_string())
        },
        other => Failure::new("invalid_resource", other.to_string()),
    }
}

fn load_state(path: &Path) -> Result<SessionState, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::new("invalid_state", e.to_string()))
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Serve {
            port,
            host,
            workflow,
            catalogs,
        } => {
            let resources = Resources::load_all(&catalogs).map_err(resource_failure)?;
            let config = ServerConfig {
                default_workflow: workflow,
                resources,
                log_dir: std::env::var_os("GBMR_LOG_DIR").map(PathBuf::from),
            };
            let server = Server::bind(&format!("{host}:{port}"), config)
                .map_err(|e| Failure::new("bind", e.to_string()))?;
            let addr = server
                .local_addr()
                .map_err(|e| Failure::new("bind", e.to_string()))?;
            println!(
                "{}",
                json!({ "listening": addr.to_string(), "proto": gbmr_session::PROTO_VERSION })
            );
            server.run().map_err(|e| Failure::new("io", e.to_string()))
        }
        Cmd::Replay {
            file,
            workflow,
            catalogs,
            out,
            state_out,
        } => {
            let log = GestureLog::parse(&read(&file)?).map_err(|e| match e {
                LogError::Parse { .. } => Failure::new("parse", e.to_string()),
                LogError::Io(e) => Failure::new("io", e.to_string()),
            })?;
            let workflow = workflow.or(log.header.workflow).ok_or_else(|| {
                Failure::new("usage", "the log names no workflow; pass --workflow")
            })?;
            let resources = Resources::load_all(&catalogs).map_err(resource_failure)?;
            let (state, transcript) = replay(&log, &SessionConfig::new(workflow, resources));
            let text = transcript_jsonl(&transcript);
            let out = out.or_else(|| {
                let dir = PathBuf::from(std::env::var_os("GBMR_LOG_DIR")?);
                let stem = file.file_stem()?.to_string_lossy().into_owned();
                Some(dir.join(format!("{stem}.transcript.jsonl")))
            });
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            if let Some(path) = state_out {
                let json = serde_json::to_string_pretty(&state).expect("session state serializes");
                write(&path, &json)?;
            }
            Ok(())
        }
        Cmd::ValidateCatalog { file } => {
            let resource = parse_resource(&read(&file)?).map_err(resource_failure)?;
            let v = violations(&resource);
            if !v.is_empty() {
                return Err(resource_failure(ResourceError::Invalid(v)));
            }
            println!("{}", json!({ "valid": true, "kind": resource.kind() }));
            Ok(())
        }
        Cmd::ExportToolpath { state_file, out } => {
            let state = load_state(&state_file)?;
            let toolpath = state.toolpath().ok_or_else(|| {
                Failure::new("no_toolpath", "the session has not produced a toolpath")
            })?;
            write(&out, &toolpath.to_json())
        }
        Cmd::ExportQc { state_file, out } => {
            let state = load_state(&state_file)?;
            if state.workflow != WorkflowKind::PanelQc {
                return Err(Failure::new(
                    "wrong_workflow",
                    format!("state is from {}, not panel_qc", state.workflow),
                ));
            }
            write(&out, &qc_report_json(&state.qc_records()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or("invalid arguments");
            return Failure::new("usage", first.trim_start_matches("error: ")).report();
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
