package pb;

class PairA {
}

class PairB extends PairA {
}
