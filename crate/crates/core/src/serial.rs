//! JSON-MMM documents, canonical digests and the line-oriented wire envelope.
//!
//! A document is `{"mmm_version":"0.1","landmarks":[...]}` with landmarks in
//! id order. Each landmark object has sorted keys:
//!
//! | key | kinds | value |
//! |---|---|---|
//! | `id` | all | 32 lowercase hex characters |
//! | `kind` | all | `vertex`, `adirectional`, `unidirectional`, `bidirectional`, `pen` |
//! | `type` | all | concrete type name |
//! | `label` | all | string |
//! | `tags` | all | sorted list of `@`-strings |
//! | `authorships` | all | list of `{"authors":[..],"date":"YYYY-MM-DD"}` |
//! | `status` | all | `{"level":"local"}`, `{"level":"public"}` or `{"level":"shared","groups":[..],"contract":{..}}` |
//! | `marks` | all | list of `{"name":..,"params":{..}}` |
//! | `timestamp` | all | epoch milliseconds |
//! | `endpoints` | adirectional | sorted pair of ids |
//! | `from`, `to` | unidirectional, bidirectional | ids |
//! | `label_fwd`, `label_bwd`, `tags_fwd`, `tags_bwd` | bidirectional | strings, tag lists |
//! | `contents` | pen | sorted list of ids |
//!
//! The pit is never written.

use std::collections::BTreeSet;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::id::LandmarkId;
use crate::landscape::Landscape;
use crate::model::{
    AbstractKind, Authorship, ConcreteType, ContractTerms, Contribution, Mark, NoContext, Payload, Status, Tag,
};

pub const MMM_VERSION: &str = "0.1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuthorshipDto {
    authors: Vec<String>,
    date: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StatusDto {
    level: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    groups: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    contract: Option<ContractTerms>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContributionDto {
    id: String,
    kind: String,
    #[serde(rename = "type")]
    ctype: String,
    label: String,
    #[serde(default)]
    tags: Vec<String>,
    #[serde(default)]
    authorships: Vec<AuthorshipDto>,
    status: StatusDto,
    #[serde(default)]
    marks: Vec<Mark>,
    timestamp: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    endpoints: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    to: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label_fwd: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label_bwd: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tags_fwd: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tags_bwd: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    contents: Option<Vec<String>>,
}

fn tag_strings(tags: &BTreeSet<Tag>) -> Vec<String> {
    tags.iter().map(|t| t.as_str().to_string()).collect()
}

fn to_dto(c: &Contribution) -> ContributionDto {
    let status = match &c.status {
        Status::Local => StatusDto { level: "local".into(), groups: None, contract: None },
        Status::Public => StatusDto { level: "public".into(), groups: None, contract: None },
        Status::SharedWith { groups, contract } => StatusDto {
            level: "shared".into(),
            groups: Some(groups.iter().cloned().collect()),
            contract: Some(contract.clone()),
        },
    };
    let mut dto = ContributionDto {
        id: c.id.to_hex(),
        kind: c.kind().name().into(),
        ctype: c.ctype.name().into(),
        label: c.label.clone(),
        tags: tag_strings(&c.tags),
        authorships: c
            .authorships
            .iter()
            .map(|a| AuthorshipDto {
                authors: a.authors.iter().cloned().collect(),
                date: a.date.format("%Y-%m-%d").to_string(),
            })
            .collect(),
        status,
        marks: c.marks.iter().cloned().collect(),
        timestamp: c.timestamp,
        endpoints: None,
        from: None,
        to: None,
        label_fwd: None,
        label_bwd: None,
        tags_fwd: None,
        tags_bwd: None,
        contents: None,
    };
    match &c.payload {
        Payload::Vertex => {}
        Payload::AdirEdge { endpoints } => {
            dto.endpoints = Some(endpoints.iter().map(LandmarkId::to_hex).collect());
        }
        Payload::UnidirEdge { from, to } => {
            dto.from = Some(from.to_hex());
            dto.to = Some(to.to_hex());
        }
        Payload::BidirEdge { from, to, label_fwd, label_bwd, tags_fwd, tags_bwd } => {
            dto.from = Some(from.to_hex());
            dto.to = Some(to.to_hex());
            dto.label_fwd = Some(label_fwd.clone());
            dto.label_bwd = Some(label_bwd.clone());
            dto.tags_fwd = Some(tag_strings(tags_fwd));
            dto.tags_bwd = Some(tag_strings(tags_bwd));
        }
        Payload::Pen { contents } => {
            dto.contents = Some(contents.iter().map(LandmarkId::to_hex).collect());
        }
    }
    dto
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn parse_tags(items: &[String]) -> Result<BTreeSet<Tag>> {
    items
        .iter()
        .map(|s| Tag::new(s.clone()).map_err(|_| malformed(format!("tag {s:?} lacks the '@' prefix"))))
        .collect()
}

fn parse_id(s: &str) -> Result<LandmarkId> {
    s.parse()
}

fn field<'a, T>(v: &'a Option<T>, name: &str, kind: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| malformed(format!("{kind} landmark lacks {name:?}")))
}

fn from_dto(dto: ContributionDto) -> Result<Contribution> {
    let id = parse_id(&dto.id)?;
    let ctype: ConcreteType = dto.ctype.parse()?;
    let kind = ctype.kind();
    if dto.kind != kind.name() {
        return Err(malformed(format!("kind {:?} does not match type {} ({})", dto.kind, ctype, kind.name())));
    }
    let extra = |present: bool, name: &str| -> Result<()> {
        if present {
            Err(malformed(format!("{} landmark carries {name:?}", kind.name())))
        } else {
            Ok(())
        }
    };
    let k = kind.name();
    let payload = match kind {
        AbstractKind::Vertex | AbstractKind::Pen | AbstractKind::AdirectionalEdge => {
            extra(dto.from.is_some(), "from")?;
            extra(dto.to.is_some(), "to")?;
            extra(dto.label_fwd.is_some() || dto.tags_fwd.is_some(), "directional attributes")?;
            extra(dto.label_bwd.is_some() || dto.tags_bwd.is_some(), "directional attributes")?;
            extra(kind != AbstractKind::Pen && dto.contents.is_some(), "contents")?;
            extra(kind != AbstractKind::AdirectionalEdge && dto.endpoints.is_some(), "endpoints")?;
            match kind {
                AbstractKind::Vertex => Payload::Vertex,
                AbstractKind::Pen => {
                    let contents = field(&dto.contents, "contents", k)?;
                    Payload::pen(contents.iter().map(|s| parse_id(s)).collect::<Result<Vec<_>>>()?)
                }
                _ => {
                    let ends = field(&dto.endpoints, "endpoints", k)?;
                    if ends.len() != 2 {
                        return Err(malformed("adirectional edge needs exactly two endpoints"));
                    }
                    Payload::adir(parse_id(&ends[0])?, parse_id(&ends[1])?)
                }
            }
        }
        AbstractKind::UnidirectionalEdge => {
            extra(dto.endpoints.is_some(), "endpoints")?;
            extra(dto.contents.is_some(), "contents")?;
            extra(dto.label_fwd.is_some() || dto.label_bwd.is_some(), "directional labels")?;
            extra(dto.tags_fwd.is_some() || dto.tags_bwd.is_some(), "directional tags")?;
            Payload::unidir(parse_id(field(&dto.from, "from", k)?)?, parse_id(field(&dto.to, "to", k)?)?)
        }
        AbstractKind::BidirectionalEdge => {
            extra(dto.endpoints.is_some(), "endpoints")?;
            extra(dto.contents.is_some(), "contents")?;
            Payload::BidirEdge {
                from: parse_id(field(&dto.from, "from", k)?)?,
                to: parse_id(field(&dto.to, "to", k)?)?,
                label_fwd: dto.label_fwd.clone().unwrap_or_default(),
                label_bwd: dto.label_bwd.clone().unwrap_or_default(),
                tags_fwd: parse_tags(dto.tags_fwd.as_deref().unwrap_or_default())?,
                tags_bwd: parse_tags(dto.tags_bwd.as_deref().unwrap_or_default())?,
            }
        }
    };
    let status = match dto.status.level.as_str() {
        "local" | "public" if dto.status.groups.is_some() || dto.status.contract.is_some() => {
            return Err(malformed("only shared statuses carry groups and contracts"));
        }
        "local" => Status::Local,
        "public" => Status::Public,
        "shared" => Status::SharedWith {
            groups: field(&dto.status.groups, "groups", "shared status")?.iter().cloned().collect(),
            contract: field(&dto.status.contract, "contract", "shared status")?.clone(),
        },
        other => return Err(malformed(format!("unknown status level {other:?}"))),
    };
    let authorships = dto
        .authorships
        .into_iter()
        .map(|a| {
            let date = NaiveDate::parse_from_str(&a.date, "%Y-%m-%d")
                .map_err(|e| malformed(format!("date {:?}: {e}", a.date)))?;
            Ok(Authorship { authors: a.authors.into_iter().collect(), date })
        })
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(Contribution {
        id,
        label: dto.label,
        tags: parse_tags(&dto.tags)?,
        ctype,
        payload,
        authorships,
        status,
        marks: dto.marks.into_iter().collect(),
        timestamp: dto.timestamp,
    })
}

fn invariant(e: Error) -> Error {
    match e {
        Error::Malformed(_) | Error::UnknownType(_) | Error::InvariantViolation(_) => e,
        other => Error::InvariantViolation(other.to_string()),
    }
}

pub fn contribution_to_value(c: &Contribution) -> Value {
    serde_json::to_value(to_dto(c)).expect("contribution DTO is always representable")
}

/// Decodes one landmark object and checks its self-contained invariants.
pub fn contribution_from_value(v: Value) -> Result<Contribution> {
    let dto: ContributionDto = serde_json::from_value(v).map_err(|e| malformed(format!("landmark: {e}")))?;
    let c = from_dto(dto)?;
    c.validate(&NoContext).map_err(invariant)?;
    Ok(c)
}

impl Serialize for Contribution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        contribution_to_value(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Contribution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        contribution_from_value(v).map_err(serde::de::Error::custom)
    }
}

/// Canonical document bytes: landmarks in id order, object keys sorted.
pub fn serialize_landscape(l: &Landscape) -> Vec<u8> {
    let landmarks: Vec<Value> = l.iter().map(contribution_to_value).collect();
    let mut out = Vec::new();
    out.extend_from_slice(b"{\"mmm_version\":");
    out.extend(serde_json::to_vec(MMM_VERSION).expect("string"));
    out.extend_from_slice(b",\"landmarks\":");
    out.extend(serde_json::to_vec(&landmarks).expect("json values serialize"));
    out.push(b'}');
    out
}

/// Parses a document, checking every invariant once all landmarks are loaded.
pub fn parse_landscape(bytes: &[u8]) -> Result<Landscape> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| malformed(format!("not JSON: {e}")))?;
    let Value::Object(mut obj) = doc else {
        return Err(malformed("document is not an object"));
    };
    match obj.remove("mmm_version") {
        Some(Value::String(v)) if v == MMM_VERSION => {}
        Some(v) => return Err(malformed(format!("unsupported mmm_version {v}"))),
        None => return Err(malformed("missing mmm_version")),
    }
    let Some(Value::Array(items)) = obj.remove("landmarks") else {
        return Err(malformed("missing landmarks array"));
    };
    if let Some(key) = obj.keys().next() {
        return Err(malformed(format!("unknown document key {key:?}")));
    }
    let mut l = Landscape::new();
    for item in items {
        let c = contribution_from_value(item)?;
        if l.contains(c.id) {
            return Err(Error::InvariantViolation(format!("id {} appears twice", c.id)));
        }
        l.put(c);
    }
    for c in l.iter() {
        c.validate(&l).map_err(invariant)?;
    }
    Ok(l)
}

/// SHA-256 of the canonical serialization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LandscapeDigest(pub [u8; 32]);

impl LandscapeDigest {
    pub fn of_bytes(bytes: &[u8]) -> Self {
        let mut out = [0u8; 32];
        out.copy_from_slice(Sha256::digest(bytes).as_slice());
        LandscapeDigest(out)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let mut out = [0u8; 32];
        hex::decode_to_slice(s.trim(), &mut out).map_err(|e| malformed(format!("digest: {e}")))?;
        Ok(LandscapeDigest(out))
    }
}

impl fmt::Display for LandscapeDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for LandscapeDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LandscapeDigest({})", &self.to_hex()[..12])
    }
}

impl Serialize for LandscapeDigest {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for LandscapeDigest {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        LandscapeDigest::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

pub fn canonical_digest(l: &Landscape) -> LandscapeDigest {
    LandscapeDigest::of_bytes(&serialize_landscape(l))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MessageKind {
    ShareOffer,
    ShareAccept,
    ShareReject,
    Subscribe,
    SubscribeInvite,
    ServeBatch,
    ObsoleteNotice,
    Ack,
}

/// One newline-delimited protocol message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireMessage {
    pub msg: MessageKind,
    pub body: Value,
}

impl WireMessage {
    pub fn new<B: Serialize>(msg: MessageKind, body: &B) -> Self {
        WireMessage { msg, body: serde_json::to_value(body).expect("message bodies serialize") }
    }

    pub fn body_as<B: for<'de> Deserialize<'de>>(&self) -> Result<B> {
        serde_json::from_value(self.body.clone()).map_err(|e| malformed(format!("{:?} body: {e}", self.msg)))
    }

    /// One line of UTF-8 JSON, without the trailing newline.
    pub fn encode_line(&self) -> String {
        // serde_json escapes control characters, so the line has no raw newline
        serde_json::to_string(self).expect("wire messages serialize")
    }

    pub fn decode_line(line: &str) -> Result<WireMessage> {
        let line = line.strip_suffix('\n').unwrap_or(line);
        if line.contains('\n') {
            return Err(malformed("embedded newline in wire message"));
        }
        serde_json::from_str(line).map_err(|e| malformed(format!("wire message: {e}")))
    }
}

pub fn encode_stream(messages: &[WireMessage]) -> String {
    messages.iter().map(|m| m.encode_line() + "\n").collect()
}

pub fn decode_stream(text: &str) -> Result<Vec<WireMessage>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(WireMessage::decode_line).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Authorship, Draft};

    fn author() -> Authorship {
        Authorship::new(["Anne"], NaiveDate::from_ymd_opt(2024, 3, 1).unwrap()).unwrap()
    }

    #[test]
    fn empty_landscape_bytes() {
        assert_eq!(serialize_landscape(&Landscape::new()), br#"{"mmm_version":"0.1","landmarks":[]}"#);
    }

    #[test]
    fn question_vertex_document() {
        let q = Draft::vertex("What colour is the sky?", ConcreteType::Question)
            .into_contribution(LandmarkId::from_parts(5, 9), author(), 5, &NoContext)
            .unwrap();
        let l = Landscape::from_contributions([q.clone()]).unwrap();
        let bytes = serialize_landscape(&l);
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["landmarks"][0]["kind"], "vertex");
        assert_eq!(v["landmarks"][0]["type"], "question");
        assert_eq!(parse_landscape(&bytes).unwrap(), l);
    }

    #[test]
    fn wire_lines_round_trip() {
        let m = WireMessage::new(MessageKind::Ack, &serde_json::json!({"text": "line\nbreak"}));
        let line = m.encode_line();
        assert!(!line.contains('\n'));
        assert!(line.contains("\"ACK\""));
        assert_eq!(WireMessage::decode_line(&line).unwrap(), m);
        assert!(WireMessage::decode_line("{\"msg\":\"NOPE\",\"body\":{}}").is_err());
    }
}
