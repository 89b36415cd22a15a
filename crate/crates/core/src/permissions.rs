//! Which landscape modifications a contribution's status allows, and the
//! editing operations that enforce it.

use crate::error::{Error, Result};
use crate::id::LandmarkId;
use crate::model::{status_leq, Authorship, ConcreteType, Draft, Mark, Payload, Status, Tag};
use crate::territory::Territory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modification {
    AddContribution,
    AddAuthorship,
    AddTag,
    EditMark,
    RemoveAuthorship,
    RemoveTag,
    ChangeEndpoints,
    AddEdgeLabel,
    AddPenLabel,
    ChangeLabel,
    ChangeType,
    AddAuthorToAuthorship,
    UpgradeStatus,
    DowngradeStatus,
    ChangeId,
}

impl Modification {
    pub const ALL: [Modification; 15] = [
        Modification::AddContribution,
        Modification::AddAuthorship,
        Modification::AddTag,
        Modification::EditMark,
        Modification::RemoveAuthorship,
        Modification::RemoveTag,
        Modification::ChangeEndpoints,
        Modification::AddEdgeLabel,
        Modification::AddPenLabel,
        Modification::ChangeLabel,
        Modification::ChangeType,
        Modification::AddAuthorToAuthorship,
        Modification::UpgradeStatus,
        Modification::DowngradeStatus,
        Modification::ChangeId,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            Modification::AddContribution => "add a contribution",
            Modification::AddAuthorship => "add an authorship",
            Modification::AddTag => "add a tag",
            Modification::EditMark => "add, modify or remove a mark",
            Modification::RemoveAuthorship => "remove an authorship",
            Modification::RemoveTag => "remove a tag",
            Modification::ChangeEndpoints => "change edge endpoints",
            Modification::AddEdgeLabel => "add an edge label",
            Modification::AddPenLabel => "add a pen label",
            Modification::ChangeLabel => "change the label",
            Modification::ChangeType => "change the concrete type",
            Modification::AddAuthorToAuthorship => "add an author to an authorship",
            Modification::UpgradeStatus => "upgrade the status",
            Modification::DowngradeStatus => "downgrade the status",
            Modification::ChangeId => "change the id",
        }
    }
}

/// `Ok(())` when `m` may be applied to a contribution with `status`.
pub fn check(m: Modification, status: &Status) -> Result<()> {
    use Modification::*;
    match m {
        AddContribution | AddAuthorship | AddTag | EditMark => Ok(()),
        DowngradeStatus | ChangeId => Err(Error::Forbidden(m.describe().to_string())),
        UpgradeStatus if status.is_public() => {
            Err(Error::Forbidden("a public contribution has no higher status".to_string()))
        }
        UpgradeStatus => Ok(()),
        _ if status.is_public() => Err(Error::ImmutablePublicField(m.describe())),
        _ => Ok(()),
    }
}

pub fn allowed(m: Modification, status: &Status) -> bool {
    check(m, status).is_ok()
}

/// A single modification of an existing contribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Edit {
    /// a new contribution concerning the edited one
    AddContribution(Draft),
    AddAuthorship(Authorship),
    AddTag(Tag),
    SetMark(Mark),
    RemoveMarks(String),
    RemoveAuthorship(Authorship),
    RemoveTag(Tag),
    ChangeEndpoints(LandmarkId, LandmarkId),
    SetLabel(String),
    ChangeType(ConcreteType),
    AddAuthorToAuthorship(Authorship, String),
    SetStatus(Status),
    ChangeId(LandmarkId),
}

impl Edit {
    /// The table row this edit falls under when applied to `c`.
    fn modification(&self, c: &crate::model::Contribution) -> Modification {
        use Modification::*;
        match self {
            Edit::AddContribution(_) => AddContribution,
            Edit::AddAuthorship(_) => AddAuthorship,
            Edit::AddTag(_) => AddTag,
            Edit::SetMark(_) | Edit::RemoveMarks(_) => EditMark,
            Edit::RemoveAuthorship(_) => RemoveAuthorship,
            Edit::RemoveTag(_) => RemoveTag,
            Edit::ChangeEndpoints(..) => ChangeEndpoints,
            Edit::SetLabel(_) if c.label.is_empty() && c.is_edge() => AddEdgeLabel,
            Edit::SetLabel(_) if c.label.is_empty() && c.is_pen() => AddPenLabel,
            Edit::SetLabel(_) => ChangeLabel,
            Edit::ChangeType(_) => ChangeType,
            Edit::AddAuthorToAuthorship(..) => AddAuthorToAuthorship,
            Edit::SetStatus(s) if *s != c.status && !status_leq(&c.status, s) => DowngradeStatus,
            Edit::SetStatus(_) => UpgradeStatus,
            Edit::ChangeId(_) => ChangeId,
        }
    }
}

/// Applies `edit` to contribution `id` if its status allows it. Returns the
/// id of the contribution added by [`Edit::AddContribution`], else `id`.
pub fn apply_edit(t: &mut Territory, id: LandmarkId, edit: Edit) -> Result<LandmarkId> {
    let current = t.landscape().require(id)?.clone();
    check(edit.modification(&current), &current.status)?;
    let mut c = current.clone();
    match edit {
        Edit::AddContribution(draft) => return t.contribute(draft),
        Edit::AddAuthorship(a) => {
            c.authorships.insert(a);
        }
        Edit::AddTag(tag) => {
            c.tags.insert(tag);
        }
        Edit::SetMark(mark) => {
            mark.validate()?;
            c.marks.insert(mark);
        }
        Edit::RemoveMarks(name) => c.remove_marks(&name),
        Edit::RemoveAuthorship(a) => {
            if !c.authorships.remove(&a) {
                return Err(Error::InvariantViolation(format!("{id} has no such authorship")));
            }
        }
        Edit::RemoveTag(tag) => {
            c.tags.remove(&tag);
        }
        Edit::ChangeEndpoints(from, to) => {
            c.payload = match c.payload {
                Payload::AdirEdge { .. } => Payload::adir(from, to),
                Payload::UnidirEdge { .. } => Payload::unidir(from, to),
                Payload::BidirEdge { label_fwd, label_bwd, tags_fwd, tags_bwd, .. } => {
                    Payload::BidirEdge { from, to, label_fwd, label_bwd, tags_fwd, tags_bwd }
                }
                _ => return Err(Error::KindMismatch(format!("{id} is not an edge"))),
            };
        }
        Edit::SetLabel(label) => c.label = label,
        Edit::ChangeType(ctype) => {
            if ctype.kind() != c.kind() {
                return Err(Error::KindMismatch(format!("{} is not a {}", ctype, c.kind().name())));
            }
            c.ctype = ctype;
        }
        Edit::AddAuthorToAuthorship(a, author) => {
            if !c.authorships.remove(&a) {
                return Err(Error::InvariantViolation(format!("{id} has no such authorship")));
            }
            let mut grown = a;
            grown.authors.insert(author);
            c.authorships.insert(grown);
        }
        Edit::SetStatus(status) => c.upgrade_status(status)?,
        Edit::ChangeId(_) => unreachable!("rejected by the permission check"),
    }
    let mut context = t.landscape().clone();
    context.remove(id);
    c.validate(&context)?;
    t.store_mut().update(id, |stored| *stored = c)?;
    Ok(id)
}
