let k = /(a)(b)/y;
let q = /(a)(b)/y;
