//! On-disk territory: config, event log, topics, subscriptions, outbox and lock.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use mmm_core::explorer::Topic;
use mmm_core::serial::WireMessage;
use mmm_core::store::Store;
use mmm_core::sync::{ShareContract, SubscriptionBook};
use mmm_core::territory::DEFAULT_LIMBO_MS;
use mmm_core::{ContractTerms, Error, Result, Territory};
use serde::{Deserialize, Serialize};

pub const CONFIG: &str = "config.toml";
const LOG: &str = "events.log";
const TOPICS: &str = "topics.json";
const SUBSCRIPTIONS: &str = "subscriptions.json";
const LOCK: &str = ".lock";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliConfig {
    pub name: String,
    pub author: String,
    #[serde(default = "default_limbo")]
    pub limbo_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_rules: Option<PathBuf>,
    #[serde(default)]
    pub contract: ContractTerms,
}

fn default_limbo() -> u64 {
    DEFAULT_LIMBO_MS
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Exclusive writer session on a territory directory.
pub struct Workspace {
    pub root: PathBuf,
    pub config: CliConfig,
    pub territory: Territory,
    pub topics: BTreeMap<String, Topic>,
    pub book: SubscriptionBook,
    lock: PathBuf,
}

impl Workspace {
    pub fn init(root: &Path, config: CliConfig) -> Result<PathBuf> {
        if root.join(CONFIG).exists() {
            return Err(Error::Forbidden(format!("{} already holds a territory", root.display())));
        }
        fs::create_dir_all(root).map_err(|e| io_err(root, e))?;
        let text = toml::to_string(&config).map_err(|e| Error::Io(e.to_string()))?;
        write_atomic(&root.join(CONFIG), text.as_bytes())?;
        write_atomic(&root.join(LOG), &[])?;
        Ok(root.to_path_buf())
    }

    pub fn open(root: &Path) -> Result<Workspace> {
        let config_path = root.join(CONFIG);
        let text = fs::read_to_string(&config_path).map_err(|e| match e.kind() {
            ErrorKind::NotFound => Error::Io(format!("no territory at {} (run `mmm init`)", root.display())),
            _ => io_err(&config_path, e),
        })?;
        let config: CliConfig =
            toml::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", config_path.display())))?;
        let lock = root.join(LOCK);
        OpenOptions::new().write(true).create_new(true).open(&lock).map_err(|e| match e.kind() {
            ErrorKind::AlreadyExists => Error::Forbidden(format!("{} is locked by another session", root.display())),
            _ => io_err(&lock, e),
        })?;
        let ws = Self::load(root, config, lock.clone());
        if ws.is_err() {
            let _ = fs::remove_file(&lock);
        }
        ws
    }

    fn load(root: &Path, config: CliConfig, lock: PathBuf) -> Result<Workspace> {
        let log_path = root.join(LOG);
        let bytes = fs::read(&log_path).map_err(|e| io_err(&log_path, e))?;
        let store = Store::read_log(bytes.as_slice())?;
        let mut territory = Territory::new(config.name.clone(), config.author.clone()).with_store(store);
        territory.limbo = config.limbo_ms;
        let now = territory.now();
        territory.store_mut().purge_limbo(now);
        Ok(Workspace {
            root: root.to_path_buf(),
            topics: read_json(&root.join(TOPICS))?.unwrap_or_default(),
            book: read_json(&root.join(SUBSCRIPTIONS))?.unwrap_or_default(),
            config,
            territory,
            lock,
        })
    }

    pub fn save(&self) -> Result<()> {
        let mut log = Vec::new();
        self.territory.store().write_log(&mut log)?;
        write_atomic(&self.root.join(LOG), &log)?;
        write_json(&self.root.join(TOPICS), &self.topics)?;
        write_json(&self.root.join(SUBSCRIPTIONS), &self.book)
    }

    pub fn default_contract(&self) -> ShareContract {
        ShareContract { terms: self.config.contract.clone(), ..ShareContract::default() }
    }

    /// Appends a message line to `outbox/<peer>.jsonl`.
    pub fn post(&self, peer: &str, msg: &WireMessage) -> Result<PathBuf> {
        let dir = self.root.join("outbox");
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        let path = dir.join(format!("{peer}.jsonl"));
        let mut text = fs::read_to_string(&path).unwrap_or_default();
        text.push_str(&msg.encode_line());
        text.push('\n');
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }
}

impl Drop for Workspace {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Option<T>> {
    match fs::read(path) {
        Ok(bytes) => {
            serde_json::from_slice(&bytes).map(Some).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
        }
        Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
        Err(e) => Err(io_err(path, e)),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(path, &bytes)
}
