mod output;
mod workspace;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mmm_core::activities::{
    self, annotate, merge_duplicates, mutable_pen_add, new_pen, red_flag, relaxed_merge, version_replace,
    AnnotationRequest, NewContent, Pattern,
};
use mmm_core::explorer::{
    self, accept_proposal, check_consistency, gluebot_suggest, planter_suggest, topic_extent_area, wayfarer_explore,
    ConsistencyOptions, Proposal, SearchConfig, Topic,
};
use mmm_core::graph::{DirectionPolicy, WayfarerConfig};
use mmm_core::serial::{contribution_to_value, decode_stream, MessageKind};
use mmm_core::sim;
use mmm_core::store::Snapshot;
use mmm_core::sync::{self, ForwardingPolicy, SubscriptionRequest};
use mmm_core::topography::{self, FilterRule};
use mmm_core::{
    canonical_digest, serialize_landscape, ConcreteType, Contribution, Draft, Error, LandmarkId, Landscape, Result,
    Status, Tag,
};
use output::{emit, Row};
use serde_json::{json, Value};
use workspace::{CliConfig, Workspace};

#[derive(Parser)]
#[command(name = "mmm", version, about = "Work with an mmm territory from the shell")]
struct Cli {
    /// Territory directory
    #[arg(long, global = true, env = "MMM_TERRITORY", default_value = ".")]
    territory: PathBuf,
    /// One JSON object per result line
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Create a territory
    Init {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, env = "USER", default_value = "anonymous")]
        author: String,
        #[arg(long, default_value_t = 30)]
        limbo_days: u64,
    },
    /// Add a node or an edge
    #[command(subcommand)]
    Add(AddCommand),
    /// Create pens and put landmarks in them
    #[command(subcommand)]
    Pen(PenCommand),
    /// Attach a new node to a target through an annotation pattern
    Annotate {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        label: String,
        #[arg(long = "type")]
        ctype: Option<String>,
        /// Definition text for the `define` pattern
        #[arg(long)]
        extra: Option<String>,
    },
    /// Equate a landmark with the pit
    Redflag {
        id: String,
        #[arg(long)]
        reason: String,
    },
    /// Obsolete a landmark with everything attached to it
    Obsolete { id: String },
    /// Replace a contribution by a new version
    Version {
        id: String,
        #[arg(long)]
        label: String,
        #[arg(long)]
        equivalent: bool,
    },
    /// Merge two duplicates, or keep one with --relaxed
    Merge {
        a: String,
        b: String,
        #[arg(long, requires = "keep")]
        relaxed: bool,
        #[arg(long)]
        keep: Option<String>,
    },
    /// Make a contribution public
    Publish { id: String },
    /// Selective search, e.g. `type:question tag:@yes after:2024-01-01`
    Query { query: String },
    /// Approximate text search
    Search {
        text: String,
        #[arg(long, default_value_t = 0.3)]
        tau: f64,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Landmarks within a number of edges of a start
    Explore(ExploreArgs),
    /// Depth, maturity and reliability of a landmark
    Metrics {
        id: String,
        /// Also report distance and proximity to this landmark
        #[arg(long)]
        to: Option<String>,
    },
    /// Named topics (anchor plus radius)
    #[command(subcommand)]
    Topic(TopicCommand),
    /// Ask a peer to serve a named topic
    Subscribe {
        #[arg(long)]
        topic: String,
        #[arg(long)]
        peer: String,
        #[arg(long, default_value_t = 1)]
        freq: u64,
        /// End of the subscription, epoch milliseconds
        #[arg(long)]
        until: u64,
    },
    /// Offer contributions to a peer through the outbox
    Share {
        #[arg(required = true)]
        ids: Vec<String>,
        #[arg(long)]
        peer: String,
        #[arg(long)]
        republish: bool,
    },
    /// Apply a file of peer messages
    Receive { file: PathBuf },
    /// Serve due subscriptions into the outbox
    Serve,
    /// Contributions received and not yet accepted
    Pending,
    /// Keep a received contribution
    Accept { id: String },
    /// Delete a received contribution
    Reject { id: String },
    /// Implantation suggestions for a draft node
    Suggest {
        #[arg(long)]
        label: String,
        #[arg(long = "type", default_value = "narrative")]
        ctype: String,
        #[arg(long, default_value_t = 0.3)]
        tau: f64,
        /// Store the draft with the suggestion at this index
        #[arg(long)]
        accept: Option<usize>,
    },
    /// Propose a bridging question between two contributions
    Glue {
        a: String,
        b: String,
        #[arg(long)]
        accept: bool,
    },
    /// Existence nodes both equated and declared different
    Consistency,
    /// Every field of one contribution
    Show { id: String },
    /// All contributions
    List,
    /// Run simulated peer networks
    #[command(subcommand)]
    Sim(SimCommand),
    /// Landscape as it was after event SEQ
    Timetravel {
        #[arg(long)]
        at: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a snapshot file with its digest
    Snapshot {
        #[arg(long)]
        at: Option<u64>,
    },
    /// Reward a contribution and mark it for trickling
    Reward {
        id: String,
        #[arg(long)]
        descriptor: String,
    },
    /// Propagate reward distances
    Trickle,
    /// Delete contributions whose limbo has ended
    Purge,
    /// Write the landscape as a document
    Export {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum AddCommand {
    /// Add a vertex and print its id
    Node {
        #[arg(long = "type")]
        ctype: String,
        #[arg(long)]
        label: String,
        #[arg(long = "tag")]
        tags: Vec<String>,
    },
    /// Add an edge and print its id
    Edge {
        #[arg(long = "type")]
        ctype: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value = "")]
        label: String,
        #[arg(long, requires = "bwd_label")]
        fwd_label: Option<String>,
        #[arg(long, requires = "fwd_label")]
        bwd_label: Option<String>,
        #[arg(long = "tag")]
        tags: Vec<String>,
    },
}

#[derive(Subcommand)]
enum PenCommand {
    /// Create a pen holding MEMBERS
    New {
        #[arg(long = "type", default_value = "default")]
        ctype: String,
        #[arg(long, default_value = "")]
        label: String,
        members: Vec<String>,
    },
    /// Put MEMBER in PEN with a pennedIn edge
    Add { member: String, pen: String },
}

#[derive(Args)]
struct ExploreArgs {
    #[arg(long)]
    from: String,
    #[arg(long)]
    max_edges: usize,
    #[arg(long = "exclude-tag")]
    exclude_tags: Vec<String>,
    #[arg(long = "type")]
    types: Vec<String>,
    #[arg(long, default_value = "any", value_parser = ["any", "forward", "backward"])]
    direction: String,
    /// Tag each landmark with filter actions, from FILE or the configured rules
    #[arg(long, value_name = "FILE")]
    filter: Option<Option<PathBuf>>,
}

#[derive(Subcommand)]
enum TopicCommand {
    /// Define or replace a topic
    New {
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        anchor: String,
        #[arg(long)]
        radius: usize,
    },
    /// Known topics
    List,
    /// Landmarks inside a topic
    Extent { name: String },
}

#[derive(Subcommand)]
enum SimCommand {
    /// Run a scenario and print its report
    Run {
        scenario: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scenario names
    List,
}

fn ctype(s: &str) -> Result<ConcreteType> {
    s.parse()
}

fn tags(items: &[String]) -> Result<BTreeSet<Tag>> {
    items.iter().map(|t| Tag::new(t.as_str())).collect()
}

fn id_row(id: LandmarkId) -> Row {
    Row::new().with("id", id.to_hex())
}

fn status_name(s: &Status) -> String {
    match s {
        Status::Local => "local".into(),
        Status::Public => "public".into(),
        Status::SharedWith { groups, .. } => {
            format!("shared:{}", groups.iter().cloned().collect::<Vec<_>>().join(","))
        }
    }
}

fn summary(c: &Contribution) -> Row {
    Row::new()
        .with("id", c.id.to_hex())
        .with("type", c.ctype.name())
        .with("label", c.label.clone())
        .with("status", status_name(&c.status))
}

fn area_rows(l: &Landscape, area: impl IntoIterator<Item = LandmarkId>) -> Vec<Row> {
    area.into_iter()
        .map(|id| match l.get(id) {
            Some(c) => summary(c),
            None => id_row(id).with("type", "pit").with("label", "⊥").with("status", Value::Null),
        })
        .collect()
}

fn ids(list: &BTreeSet<LandmarkId>) -> Value {
    list.iter().map(|id| id.to_hex()).collect()
}

fn proposal_rows(p: &Proposal) -> Vec<Row> {
    let mut rows: Vec<Row> = p
        .nodes
        .iter()
        .enumerate()
        .map(|(i, d)| {
            Row::new().with("item", format!("node {i}")).with("type", d.ctype.name()).with("detail", d.label.clone())
        })
        .collect();
    for e in &p.edges {
        let end = |x: &explorer::ProposalEnd| match x {
            explorer::ProposalEnd::Existing(id) => id.to_hex(),
            explorer::ProposalEnd::Proposed(i) => format!("node {i}"),
        };
        rows.push(
            Row::new()
                .with("item", "edge")
                .with("type", e.ctype.name())
                .with("detail", format!("{} -> {}", end(&e.from), end(&e.to))),
        );
    }
    rows
}

fn run(cli: Cli) -> Result<Vec<Row>> {
    let root = cli.territory.as_path();
    match cli.command {
        Command::Init { name, author, limbo_days } => {
            let name = name.unwrap_or_else(|| default_name(root));
            let config = CliConfig {
                name: name.clone(),
                author,
                limbo_ms: limbo_days * mmm_core::territory::DAY_MS,
                filter_rules: None,
                contract: Default::default(),
            };
            let path = Workspace::init(root, config)?;
            Ok(vec![Row::new().with("territory", path.display().to_string()).with("name", name)])
        }
        Command::Sim(SimCommand::List) => Ok(sim::SCENARIOS.iter().map(|s| Row::new().with("scenario", *s)).collect()),
        Command::Sim(SimCommand::Run { scenario, seed, out }) => {
            let outcome = sim::run_scenario(&scenario, seed)?;
            let report = outcome.to_json();
            if let Some(path) = &out {
                std::fs::write(path, &report).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            if cli.json {
                let value = serde_json::to_value(&outcome).map_err(|e| Error::Io(e.to_string()))?;
                Ok(vec![Row(value.as_object().cloned().unwrap_or_default().into_iter().collect())])
            } else {
                print!("{report}");
                Ok(Vec::new())
            }
        }
        command => {
            let mut ws = Workspace::open(root)?;
            let rows = session(&mut ws, command, cli.json)?;
            ws.save()?;
            Ok(rows)
        }
    }
}

fn default_name(root: &Path) -> String {
    std::fs::canonicalize(root)
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "territory".into())
}

fn session(ws: &mut Workspace, command: Command, json: bool) -> Result<Vec<Row>> {
    let t = &mut ws.territory;
    let resolve = |t: &mmm_core::Territory, s: &str| t.landscape().resolve(s);
    let rows = match command {
        Command::Init { .. } | Command::Sim(_) => unreachable!("handled without a session"),
        Command::Add(AddCommand::Node { ctype: ty, label, tags: tag_list }) => {
            let draft = Draft::vertex(label, ctype(&ty)?).tags(tags(&tag_list)?);
            vec![id_row(t.contribute(draft)?)]
        }
        Command::Add(AddCommand::Edge { ctype: ty, from, to, label, fwd_label, bwd_label, tags: tag_list }) => {
            let (from, to) = (resolve(t, &from)?, resolve(t, &to)?);
            let mut draft = Draft::edge(ctype(&ty)?, from, to).label(label).tags(tags(&tag_list)?);
            if let (Some(f), Some(b)) = (fwd_label, bwd_label) {
                draft = draft.directional(f, b);
            }
            vec![id_row(t.contribute(draft)?)]
        }
        Command::Pen(PenCommand::New { ctype: ty, label, members }) => {
            let members = members.iter().map(|m| resolve(t, m)).collect::<Result<Vec<_>>>()?;
            vec![id_row(new_pen(t, ctype(&ty)?, &label, members)?)]
        }
        Command::Pen(PenCommand::Add { member, pen }) => {
            let (member, pen) = (resolve(t, &member)?, resolve(t, &pen)?);
            vec![id_row(mutable_pen_add(t, member, pen)?)]
        }
        Command::Annotate { pattern, target, label, ctype: ty, extra } => {
            let pattern: Pattern = pattern.parse()?;
            let content = match ty {
                Some(ty) => NewContent::typed(label, ctype(&ty)?),
                None => NewContent::text(label),
            };
            let mut req = AnnotationRequest::new(resolve(t, &target)?, pattern, content);
            if let Some(extra) = extra {
                req = req.with_extra(NewContent::text(extra));
            }
            let a = annotate(t, &req)?;
            vec![Row::new()
                .with("node", a.node.to_hex())
                .with("edge", a.edge.to_hex())
                .with("extra", a.extra.iter().map(|id| id.to_hex()).collect::<Vec<_>>())]
        }
        Command::Redflag { id, reason } => {
            let target = resolve(t, &id)?;
            vec![id_row(red_flag(t, target, &reason)?)]
        }
        Command::Obsolete { id } => {
            let id = resolve(t, &id)?;
            let closure = activities::obsolete(t, id)?;
            let deadline = t.landscape().obsolete().get(&id).copied();
            vec![Row::new().with("obsoleted", ids(&closure)).with("deadline", deadline)]
        }
        Command::Version { id, label, equivalent } => {
            let id = resolve(t, &id)?;
            let v = version_replace(t, id, &NewContent::text(label), equivalent)?;
            vec![Row::new()
                .with("new", v.new_id.to_hex())
                .with("link", v.link.to_hex())
                .with("copies", v.copies.len())
                .with("needs_redirect", v.needs_redirect.iter().map(|e| e.to_hex()).collect::<Vec<_>>())
                .with("obsoleted", ids(&v.obsoleted))]
        }
        Command::Merge { a, b, relaxed, keep } => {
            let (a, b) = (resolve(t, &a)?, resolve(t, &b)?);
            if relaxed {
                let keep = resolve(t, keep.as_deref().unwrap_or_default())?;
                let link = relaxed_merge(t, a, b, keep)?;
                vec![Row::new().with("survivor", keep.to_hex()).with("link", link.to_hex())]
            } else {
                let m = merge_duplicates(t, a, b)?;
                vec![Row::new()
                    .with("survivor", m.survivor.to_hex())
                    .with("link", m.link.map(|l| l.to_hex()))
                    .with("obsoleted", ids(&m.obsoleted))]
            }
        }
        Command::Publish { id } => {
            let id = resolve(t, &id)?;
            sync::publish(t, id)?;
            vec![id_row(id).with("status", "public")]
        }
        Command::Query { query } => area_rows(t.landscape(), explorer::selective_search(t.landscape(), &query)?),
        Command::Search { text, tau, radius } => {
            let area = explorer::approximate_search(t.landscape(), &text, &SearchConfig { tau, radius })?;
            area_rows(t.landscape(), area)
        }
        Command::Explore(args) => explore(ws, args)?,
        Command::Metrics { id, to } => {
            let l = t.landscape();
            let id = resolve(t, &id)?;
            let mut row = id_row(id)
                .with("depth", topography::depth(l, id)?)
                .with("outgoing_depth", topography::outgoing_depth(l, id)?)
                .with("maturity", topography::maturity(l, id)?)
                .with("reliability", topography::reliability(l, id)?)
                .with("red_flags", topography::red_flag_count(l, id));
            if let Some(to) = to {
                let to = resolve(t, &to)?;
                row = row
                    .with("to", to.to_hex())
                    .with("distance", topography::distance(l, id, to)?)
                    .with("proximity", topography::proximity(l, id, to)?.0);
            }
            vec![row]
        }
        Command::Topic(TopicCommand::New { name, anchor, radius }) => {
            let anchor = resolve(t, &anchor)?;
            t.landscape().require(anchor)?;
            let name = name.unwrap_or_else(|| anchor.short());
            ws.topics.insert(name.clone(), Topic::new(anchor, radius));
            vec![Row::new().with("topic", name).with("anchor", anchor.to_hex()).with("radius", radius)]
        }
        Command::Topic(TopicCommand::List) => ws
            .topics
            .iter()
            .map(|(name, topic)| {
                Row::new()
                    .with("topic", name.clone())
                    .with("anchor", topic.anchor.to_hex())
                    .with("radius", topic.radius)
            })
            .collect(),
        Command::Topic(TopicCommand::Extent { name }) => {
            let topic = named_topic(ws, &name)?;
            let l = ws.territory.landscape();
            area_rows(l, topic_extent_area(l, &topic)?)
        }
        Command::Subscribe { topic, peer, freq, until } => {
            let topic = named_topic(ws, &topic)?;
            let req = SubscriptionRequest {
                topic,
                frequency: freq,
                until,
                serving_peer: peer.clone(),
                forwarding: ForwardingPolicy::default(),
            };
            let msg = sync::subscribe(&mut ws.territory, &req)?;
            let path = ws.post(&peer, &msg)?;
            vec![Row::new().with("peer", peer).with("outbox", path.display().to_string())]
        }
        Command::Share { ids: list, peer, republish } => {
            let list = list.iter().map(|s| resolve(t, s)).collect::<Result<Vec<_>>>()?;
            let mut contract = ws.default_contract();
            contract.terms.allow_republish |= republish;
            let msg = sync::offer_share(&mut ws.territory, &peer, &list, &contract)?;
            let mut rows =
                vec![Row::new().with("peer", peer.clone()).with("outbox", ws.post(&peer, &msg)?.display().to_string())];
            if let Some(notice) = sync::obsolete_notice(&ws.territory, &peer) {
                ws.post(&peer, &notice)?;
                rows[0] = rows[0].clone().with("notices", true);
            }
            rows
        }
        Command::Receive { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let mut rows = Vec::new();
            for msg in decode_stream(&text)? {
                let kind = serde_json::to_value(msg.msg).unwrap_or(Value::Null);
                if msg.msg == MessageKind::Subscribe {
                    ws.book.accept(&ws.territory, &msg)?;
                    rows.push(Row::new().with("message", kind).with("accepted", true));
                    continue;
                }
                let r = sync::receive_share(&mut ws.territory, &msg)?;
                rows.push(
                    Row::new()
                        .with("message", kind)
                        .with("from", r.from)
                        .with("fresh", r.fresh.iter().map(|i| i.to_hex()).collect::<Vec<_>>())
                        .with("merged", r.merged.iter().map(|i| i.to_hex()).collect::<Vec<_>>())
                        .with("filtered", r.filtered.iter().map(|i| i.to_hex()).collect::<Vec<_>>())
                        .with("invalid", r.invalid.iter().map(|(i, e)| format!("{i}:{e}")).collect::<Vec<_>>())
                        .with("notices", r.notices.iter().map(|i| i.to_hex()).collect::<Vec<_>>()),
                );
            }
            rows
        }
        Command::Serve => {
            let now = ws.territory.now();
            let batches = sync::serve_subscriptions(&mut ws.territory, &mut ws.book, now)?;
            let mut rows = Vec::new();
            for (peer, msg) in batches {
                let path = ws.post(&peer, &msg)?;
                rows.push(Row::new().with("peer", peer).with("outbox", path.display().to_string()));
            }
            rows
        }
        Command::Pending => {
            let l = t.landscape();
            area_rows(l, sync::pending_new(t))
        }
        Command::Accept { id } => {
            let id = resolve(t, &id)?;
            sync::accept_new(t, id)?;
            vec![id_row(id).with("accepted", true)]
        }
        Command::Reject { id } => {
            let id = resolve(t, &id)?;
            sync::reject_new(t, id)?;
            vec![id_row(id).with("accepted", false)]
        }
        Command::Suggest { label, ctype: ty, tau, accept } => {
            let ty = ctype(&ty)?;
            let suggestions = planter_suggest(t.landscape(), &label, ty, tau);
            if let Some(i) = accept {
                let s = suggestions.get(i).ok_or_else(|| Error::Forbidden(format!("no suggestion {i}")))?;
                let added = accept_proposal(t, &s.proposal(&Draft::vertex(label, ty)))?;
                added.into_iter().map(id_row).collect()
            } else {
                suggestions
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        Row::new()
                            .with("index", i)
                            .with("target", s.target.to_hex())
                            .with("kind", format!("{:?}", s.kind).to_lowercase())
                            .with("edge", s.edge.map(|e| e.name()))
                            .with("score", (s.score * 1000.0).round() / 1000.0)
                    })
                    .collect()
            }
        }
        Command::Glue { a, b, accept } => {
            let (a, b) = (resolve(t, &a)?, resolve(t, &b)?);
            let p = gluebot_suggest(t.landscape(), a, b)?;
            if accept {
                accept_proposal(t, &p)?.into_iter().map(id_row).collect()
            } else {
                proposal_rows(&p)
            }
        }
        Command::Consistency => check_consistency(t.landscape(), &ConsistencyOptions::default())
            .into_iter()
            .map(|w| {
                Row::new()
                    .with("a", w.a.to_hex())
                    .with("b", w.b.to_hex())
                    .with("equates_path", w.path_eq.iter().map(|i| i.to_hex()).collect::<Vec<_>>())
                    .with("differs", w.path_diff[1].to_hex())
            })
            .collect(),
        Command::Show { id } => {
            let id = resolve(t, &id)?;
            let c = t.landscape().require(id)?;
            let Value::Object(map) = contribution_to_value(c) else { unreachable!("contributions are objects") };
            if json {
                vec![Row(map.into_iter().collect())]
            } else {
                map.into_iter().map(|(k, v)| Row::new().with("field", k).with("value", v)).collect()
            }
        }
        Command::List => t.landscape().iter().map(summary).collect(),
        Command::Timetravel { at, out } => {
            let l = t.store().replay_to(at)?;
            if let Some(path) = &out {
                std::fs::write(path, serialize_landscape(&l))
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            vec![Row::new().with("seq", at).with("landmarks", l.len()).with("digest", canonical_digest(&l).to_hex())]
        }
        Command::Snapshot { at } => {
            let store = t.store();
            let snap: Snapshot = store.snapshot_at(at.unwrap_or(store.latest_seq()))?;
            let dir = ws.root.join("snapshots");
            std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            let stem = format!("seq-{}", snap.at_seq);
            snap.write_files(&dir, &stem)?;
            vec![Row::new()
                .with("seq", snap.at_seq)
                .with("digest", snap.digest.to_hex())
                .with("file", dir.join(format!("{stem}.mmm.json")).display().to_string())]
        }
        Command::Reward { id, descriptor } => {
            let id = resolve(t, &id)?;
            sync::reward(t, id, &descriptor)?;
            vec![id_row(id).with("descriptor", descriptor)]
        }
        Command::Trickle => vec![Row::new().with("changed", sync::trickle(t)?)],
        Command::Purge => {
            let now = t.now();
            vec![Row::new().with("purged", ids(&t.store_mut().purge_limbo(now)))]
        }
        Command::Export { out } => {
            std::fs::write(&out, serialize_landscape(t.landscape()))
                .map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            vec![Row::new()
                .with("file", out.display().to_string())
                .with("digest", canonical_digest(t.landscape()).to_hex())]
        }
    };
    Ok(rows)
}

fn named_topic(ws: &Workspace, name: &str) -> Result<Topic> {
    if let Some(topic) = ws.topics.get(name) {
        return Ok(topic.clone());
    }
    Err(Error::Forbidden(format!("no topic named {name:?} (see `mmm topic list`)")))
}

fn explore(ws: &Workspace, args: ExploreArgs) -> Result<Vec<Row>> {
    let l = ws.territory.landscape();
    let start = l.resolve(&args.from)?;
    let cfg = WayfarerConfig {
        max_edges: args.max_edges,
        traversable_types: args.types.iter().map(|s| ctype(s)).collect::<Result<_>>()?,
        excluded_tags: tags(&args.exclude_tags)?,
        direction: match args.direction.as_str() {
            "forward" => DirectionPolicy::ForwardOnly,
            "backward" => DirectionPolicy::BackwardOnly,
            _ => DirectionPolicy::Any,
        },
    };
    let area = wayfarer_explore(l, start, &cfg)?;
    let mut rows = area_rows(l, area.iter().copied());
    if let Some(file) = args.filter {
        let path = file
            .or_else(|| ws.config.filter_rules.as_ref().map(|p| ws.root.join(p)))
            .ok_or_else(|| Error::Forbidden("no rules file given and no filter_rules in config.toml".into()))?;
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let verdicts: Vec<_> =
            FilterRule::load_toml(&text)?.iter().map(|r| topography::apply_filter(r, l, &area)).collect();
        for (row, id) in rows.iter_mut().zip(area.iter()) {
            let actions: Vec<String> =
                verdicts.iter().filter_map(|v| v.get(id)).map(|a| format!("{a:?}").to_lowercase()).collect();
            *row = row.clone().with("actions", actions);
        }
    }
    Ok(rows)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(rows) => {
            if let Err(e) = emit(&rows, json) {
                eprintln!("error: Io: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if json {
                eprintln!("{}", json!({"error": e.name(), "message": e.to_string()}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
