use crate::train::config::EtaPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Up,
    Down,
    Flat,
}

fn moves(history: &[f64]) -> Vec<Move> {
    history
        .windows(2)
        .map(|w| {
            if w[1] < w[0] {
                Move::Down
            } else if w[1] > w[0] {
                Move::Up
            } else {
                Move::Flat
            }
        })
        .collect()
}

/// Pattern rule applied to the errors recorded since the last adjustment
/// (oldest first): four straight decreases multiply `eta` by `up`, two
/// consecutive up/down pairs multiply it by `down`, anything else keeps it.
pub fn adapt_eta(history: &[f64], eta: f64, up: f64, down: f64) -> f64 {
    let m = moves(history);
    if m.len() < 4 {
        return eta;
    }
    let tail = &m[m.len() - 4..];
    if tail.iter().all(|&mv| mv == Move::Down) {
        eta * up
    } else if tail == [Move::Up, Move::Down, Move::Up, Move::Down] {
        eta * down
    } else {
        eta
    }
}

/// Step size for each epoch under an [`EtaPolicy`].
#[derive(Clone, Debug)]
pub struct EtaSchedule {
    eta0: f64,
    eta: f64,
    policy: EtaPolicy,
    epochs_seen: usize,
    window: Vec<f64>,
}

impl EtaSchedule {
    pub fn new(eta0: f64, policy: EtaPolicy) -> Self {
        EtaSchedule {
            eta0,
            eta: eta0,
            policy,
            epochs_seen: 0,
            window: Vec::new(),
        }
    }

    pub fn current(&self) -> f64 {
        self.eta
    }

    /// Feeds the training error of the epoch just finished.
    pub fn observe(&mut self, error: f64) {
        self.epochs_seen += 1;
        match self.policy {
            EtaPolicy::Fixed => {}
            EtaPolicy::StepDecay { factor, every } => {
                self.eta = self.eta0 * factor.powi((self.epochs_seen / every) as i32);
            }
            EtaPolicy::Adaptive { up, down } => {
                self.window.push(error);
                let next = adapt_eta(&self.window, self.eta, up, down);
                if next != self.eta {
                    self.eta = next;
                    self.window.clear();
                    self.window.push(error);
                }
            }
        }
    }
}
