//! Ring descriptors: named variables grouped into blocks, a coefficient
//! field, and a default monomial order.
//!
//! Rings are immutable and shared behind `Arc`.  Extending a ring appends
//! variables, so monomials built for the base ring remain valid in the
//! extension; this is what the elimination-based kernels (intersection,
//! colon, saturation) rely on.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldKind;
use crate::monomial::{Monomial, Order};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub block: usize,
}

/// A polynomial ring descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    vars: Vec<VarInfo>,
    blocks: Vec<String>,
    field: FieldKind,
    order: Order,
}

impl Ring {
    /// Builds a ring with the given blocks of variables, default grevlex
    /// order with priority following declaration order.
    pub fn new(field: FieldKind, blocks: &[(&str, &[&str])]) -> Result<Arc<Ring>> {
        let mut vars = Vec::new();
        let mut block_names = Vec::new();
        for (bi, (bname, vnames)) in blocks.iter().enumerate() {
            block_names.push(bname.to_string());
            for v in *vnames {
                if vars.iter().any(|w: &VarInfo| w.name == *v) {
                    return Err(Error::VariableClash(v.to_string()));
                }
                vars.push(VarInfo { name: v.to_string(), block: bi });
            }
        }
        let priority: Vec<u32> = (0..vars.len() as u32).collect();
        Ok(Arc::new(Ring {
            vars,
            blocks: block_names,
            field,
            order: Order::grevlex(priority),
        }))
    }

    /// Single unnamed block, variables `names`, grevlex.
    pub fn simple(field: FieldKind, names: &[&str]) -> Result<Arc<Ring>> {
        Ring::new(field, &[("", names)])
    }

    pub fn field(&self) -> &FieldKind {
        &self.field
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, v: u32) -> &str {
        &self.vars[v as usize].name
    }

    pub fn var_index(&self, name: &str) -> Option<u32> {
        self.vars.iter().position(|w| w.name == name).map(|i| i as u32)
    }

    pub fn block_of_var(&self, v: u32) -> usize {
        self.vars[v as usize].block
    }

    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b == name)
    }

    pub fn block_name(&self, b: usize) -> &str {
        &self.blocks[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Variable indices belonging to block `b`, ascending.
    pub fn block_vars(&self, b: usize) -> Vec<u32> {
        (0..self.vars.len() as u32)
            .filter(|&v| self.vars[v as usize].block == b)
            .collect()
    }

    pub fn all_vars(&self) -> Vec<u32> {
        (0..self.vars.len() as u32).collect()
    }

    /// Same ring with a different monomial order.
    pub fn with_order(self: &Arc<Ring>, order: Order) -> Arc<Ring> {
        let mut r = (**self).clone();
        r.order = order;
        Arc::new(r)
    }

    /// Appends a new block of variables; existing indices are unchanged.
    /// The order is reset to grevlex over the full (old then new) list.
    pub fn extended(self: &Arc<Ring>, block: &str, names: &[&str]) -> Result<Arc<Ring>> {
        let mut r = (**self).clone();
        let bi = r.blocks.len();
        r.blocks.push(block.to_string());
        for v in names {
            if r.vars.iter().any(|w| w.name == *v) {
                return Err(Error::VariableClash(v.to_string()));
            }
            r.vars.push(VarInfo { name: v.to_string(), block: bi });
        }
        r.order = Order::grevlex((0..r.vars.len() as u32).collect());
        Ok(Arc::new(r))
    }

    /// Elimination order that puts `front` first (grevlex within the front
    /// block, grevlex on the rest).
    pub fn elimination_order(&self, front: &[u32]) -> Order {
        let mut priority: Vec<u32> = front.to_vec();
        priority.extend((0..self.vars.len() as u32).filter(|v| !front.contains(v)));
        Order::block(front.to_vec(), priority)
    }

    /// True when both descriptors have the same variables and field,
    /// ignoring the order.
    pub fn same_frame(&self, other: &Ring) -> bool {
        self.vars == other.vars && self.field == other.field
    }

    /// Renders a monomial with this ring's variable names.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = m
            .pairs()
            .iter()
            .map(|&(v, e)| {
                let name = self.var_name(v);
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "{}[{}]", self.field, names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_and_extension() {
        let r = Ring::new(FieldKind::Rationals, &[("X", &["x0", "x1"]), ("Z", &["z0"])]).unwrap();
        assert_eq!(r.num_vars(), 3);
        assert_eq!(r.block_vars(0), vec![0, 1]);
        assert_eq!(r.block_vars(1), vec![2]);
        assert_eq!(r.var_index("z0"), Some(2));

        let ext = r.extended("aux", &["w"]).unwrap();
        assert_eq!(ext.num_vars(), 4);
        assert_eq!(ext.var_index("x0"), Some(0)); // indices stable
        assert_eq!(ext.var_index("w"), Some(3));
        assert!(Ring::new(FieldKind::Rationals, &[("X", &["a", "a"])]).is_err());
    }
}
