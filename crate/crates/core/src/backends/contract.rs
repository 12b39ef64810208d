use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::ParameterStore;
use crate::ansatz::{Endpoint, NodeKind, TensorNetwork};
use crate::error::{Error, Result};

/// Dense row-major real tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let size: usize = shape.iter().product();
        if size != data.len() {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape:?} needs {size} entries, got {}",
                data.len()
            )));
        }
        Ok(Tensor { shape, data })
    }

    pub fn scalar(x: f64) -> Self {
        Tensor { shape: Vec::new(), data: vec![x] }
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let size = shape.iter().product();
        Tensor { shape, data: vec![0.0; size] }
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        let mut flat = 0;
        for (i, d) in index.iter().zip(&self.shape) {
            flat = flat * d + i;
        }
        self.data[flat]
    }

    /// The value of a rank-0 tensor.
    pub fn item(&self) -> Option<f64> {
        self.shape.is_empty().then(|| self.data[0])
    }
}

/// Pairwise contraction schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Always contract the connected pair with the smallest result.
    Greedy,
    /// Fold nodes into an accumulator in index order.
    Sequential,
}

/// A tensor whose axes are named by labels shared with its neighbours.
#[derive(Debug, Clone)]
struct Item {
    t: Tensor,
    labels: Vec<usize>,
}

/// Contracts the network to a tensor over its open legs, in order.
pub fn contract(tn: &TensorNetwork, ps: &ParameterStore) -> Result<Tensor> {
    contract_ordered(tn, ps, Order::Greedy)
}

pub fn contract_ordered(tn: &TensorNetwork, ps: &ParameterStore, order: Order) -> Result<Tensor> {
    let setup = Setup::new(tn, ps)?;
    let items: Vec<Item> = setup.items.into_iter().flatten().collect();
    let out = reduce(items, order);
    Ok(arrange(out, &setup.open))
}

/// Gradient of `⟨upstream, contract(tn)⟩` with respect to every parameter,
/// laid out like `ps.values()`.
pub fn contract_grad(tn: &TensorNetwork, ps: &ParameterStore, upstream: &Tensor) -> Result<Vec<f64>> {
    let setup = Setup::new(tn, ps)?;
    let open_dims: Vec<usize> = setup.open.iter().map(|&l| setup.dims[l]).collect();
    if upstream.shape != open_dims {
        return Err(Error::ShapeMismatch(format!(
            "cotangent has shape {:?}, network output {:?}",
            upstream.shape, open_dims
        )));
    }
    let seed = Item { t: upstream.clone(), labels: setup.open.clone() };
    let mut grad = vec![0.0; ps.len()];
    for (node, name) in setup.params.iter() {
        let labels = setup.items[*node].as_ref().map(|it| it.labels.clone()).unwrap_or_default();
        let mut rest: Vec<Item> = setup
            .items
            .iter()
            .enumerate()
            .filter(|(i, _)| i != node)
            .filter_map(|(_, it)| it.clone())
            .collect();
        rest.push(seed.clone());
        let env = arrange(reduce(rest, Order::Greedy), &labels);
        let offset = ps.offset(name)?;
        for (g, e) in grad[offset..offset + env.data.len()].iter_mut().zip(&env.data) {
            *g += e;
        }
    }
    Ok(grad)
}

struct Setup {
    /// One item per network node; copy nodes may expand into several.
    items: Vec<Option<Item>>,
    dims: Vec<usize>,
    open: Vec<usize>,
    params: Vec<(usize, alloc::string::String)>,
}

impl Setup {
    fn new(tn: &TensorNetwork, ps: &ParameterStore) -> Result<Setup> {
        tn.validate()?;
        let mut dims = Vec::new();
        let mut leg_labels: Vec<Vec<usize>> = tn.nodes.iter().map(|n| vec![usize::MAX; n.shape.len()]).collect();
        let fresh = |dims: &mut Vec<usize>, d: usize| {
            dims.push(d);
            dims.len() - 1
        };
        let assign = |e: Endpoint, l: usize, legs: &mut Vec<Vec<usize>>| legs[e.node][e.leg] = l;
        for &(a, b) in &tn.edges {
            let l = fresh(&mut dims, tn.nodes[a.node].shape[a.leg]);
            assign(a, l, &mut leg_labels);
            assign(b, l, &mut leg_labels);
        }
        let mut open = Vec::new();
        for &e in &tn.open {
            let l = fresh(&mut dims, tn.nodes[e.node].shape[e.leg]);
            assign(e, l, &mut leg_labels);
            open.push(l);
        }

        let mut items = Vec::with_capacity(tn.nodes.len());
        let mut extra = Vec::new();
        let mut params = Vec::new();
        for (i, (node, labels)) in tn.nodes.iter().zip(leg_labels).enumerate() {
            match &node.kind {
                NodeKind::Param(name) => {
                    let shape = ps.shape(name)?;
                    if shape != node.shape.as_slice() {
                        return Err(Error::ShapeMismatch(format!(
                            "symbol `{name}` has shape {shape:?}, network expects {:?}",
                            node.shape
                        )));
                    }
                    let t = Tensor { shape: node.shape.clone(), data: ps.get(name)?.to_vec() };
                    items.push(Some(Item { t, labels }));
                    params.push((i, name.clone()));
                }
                NodeKind::Delta | NodeKind::Copy => {
                    let d = node.shape.first().copied().unwrap_or(1);
                    if node.shape.iter().any(|&x| x != d) {
                        return Err(Error::ShapeMismatch(format!("delta node {i} has unequal legs {:?}", node.shape)));
                    }
                    // long copies become a chain of three-leg copies
                    let mut rest = labels;
                    while rest.len() > 3 {
                        let link = fresh(&mut dims, d);
                        let tail = rest.split_off(2);
                        rest.push(link);
                        extra.push(Item { t: delta(rest.len(), d), labels: rest });
                        rest = vec![link];
                        rest.extend(tail);
                    }
                    items.push(Some(Item { t: delta(rest.len(), d), labels: rest }));
                }
            }
        }
        items.extend(extra.into_iter().map(Some));
        Ok(Setup { items, dims, open, params })
    }
}

fn delta(order: usize, d: usize) -> Tensor {
    let mut t = Tensor::zeros(vec![d; order]);
    if order == 0 {
        t.data[0] = 1.0;
        return t;
    }
    let stride: usize = (0..order).map(|k| d.pow(k as u32)).sum();
    for i in 0..d {
        t.data[i * stride] = 1.0;
    }
    t
}

fn reduce(mut items: Vec<Item>, order: Order) -> Item {
    if items.is_empty() {
        return Item { t: Tensor::scalar(1.0), labels: Vec::new() };
    }
    match order {
        Order::Sequential => {
            let mut acc = items.remove(0);
            for it in items {
                acc = pair(&acc, &it);
            }
            acc
        }
        Order::Greedy => {
            while items.len() > 1 {
                let (i, j) = pick(&items);
                let b = items.swap_remove(j);
                let a = items.swap_remove(i);
                items.push(pair(&a, &b));
            }
            items.pop().expect("one item left")
        }
    }
}

/// The connected pair with the smallest result; an outer product of the
/// two smallest items when nothing is connected.
fn pick(items: &[Item]) -> (usize, usize) {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            let (a, b) = (&items[i], &items[j]);
            if !a.labels.iter().any(|l| b.labels.contains(l)) {
                continue;
            }
            let mut size = 1usize;
            for (k, l) in a.labels.iter().enumerate() {
                if !b.labels.contains(l) {
                    size = size.saturating_mul(a.t.shape[k]);
                }
            }
            for (k, l) in b.labels.iter().enumerate() {
                if !a.labels.contains(l) {
                    size = size.saturating_mul(b.t.shape[k]);
                }
            }
            if best.is_none_or(|(s, _, _)| size < s) {
                best = Some((size, i, j));
            }
        }
    }
    if let Some((_, i, j)) = best {
        return (i, j);
    }
    let mut by_size: Vec<usize> = (0..items.len()).collect();
    by_size.sort_by_key(|&k| items[k].t.data.len());
    let (i, j) = (by_size[0], by_size[1]);
    (i.min(j), i.max(j))
}

/// Sums over shared labels; the result keeps `a`'s free axes then `b`'s.
fn pair(a: &Item, b: &Item) -> Item {
    let shared: Vec<usize> = a.labels.iter().copied().filter(|l| b.labels.contains(l)).collect();
    let free_a: Vec<usize> = a.labels.iter().copied().filter(|l| !shared.contains(l)).collect();
    let free_b: Vec<usize> = b.labels.iter().copied().filter(|l| !shared.contains(l)).collect();

    let pa: Vec<usize> = free_a.iter().chain(&shared).map(|l| pos(&a.labels, *l)).collect();
    let pb: Vec<usize> = shared.iter().chain(&free_b).map(|l| pos(&b.labels, *l)).collect();
    let ta = permute(&a.t, &pa);
    let tb = permute(&b.t, &pb);

    let m: usize = free_a.iter().map(|l| a.t.shape[pos(&a.labels, *l)]).product();
    let k: usize = shared.iter().map(|l| a.t.shape[pos(&a.labels, *l)]).product();
    let n: usize = free_b.iter().map(|l| b.t.shape[pos(&b.labels, *l)]).product();
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        let row = &mut out[i * n..(i + 1) * n];
        for p in 0..k {
            let x = ta.data[i * k + p];
            if x == 0.0 {
                continue;
            }
            let col = &tb.data[p * n..(p + 1) * n];
            for (o, y) in row.iter_mut().zip(col) {
                *o += x * y;
            }
        }
    }
    let mut shape: Vec<usize> = free_a.iter().map(|l| a.t.shape[pos(&a.labels, *l)]).collect();
    shape.extend(free_b.iter().map(|l| b.t.shape[pos(&b.labels, *l)]));
    let mut labels = free_a;
    labels.extend(free_b);
    Item { t: Tensor { shape, data: out }, labels }
}

fn pos(labels: &[usize], l: usize) -> usize {
    labels.iter().position(|&x| x == l).expect("label present")
}

/// Axis `k` of the result is axis `perm[k]` of the input.
fn permute(t: &Tensor, perm: &[usize]) -> Tensor {
    if perm.iter().enumerate().all(|(k, &p)| k == p) {
        return t.clone();
    }
    let rank = t.shape.len();
    let mut strides = vec![1usize; rank];
    for k in (0..rank.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * t.shape[k + 1];
    }
    let shape: Vec<usize> = perm.iter().map(|&p| t.shape[p]).collect();
    let src_strides: Vec<usize> = perm.iter().map(|&p| strides[p]).collect();
    let mut data = Vec::with_capacity(t.data.len());
    let mut idx = vec![0usize; rank];
    let mut src = 0usize;
    for _ in 0..t.data.len() {
        data.push(t.data[src]);
        for k in (0..rank).rev() {
            idx[k] += 1;
            src += src_strides[k];
            if idx[k] < shape[k] {
                break;
            }
            src -= src_strides[k] * shape[k];
            idx[k] = 0;
        }
    }
    Tensor { shape, data }
}

/// Reorders a fully reduced item so its axes follow `labels`.
fn arrange(item: Item, labels: &[usize]) -> Tensor {
    let perm: Vec<usize> = labels.iter().map(|l| pos(&item.labels, *l)).collect();
    permute(&item.t, &perm)
}
