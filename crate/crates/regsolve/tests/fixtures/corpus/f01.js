const re = /<(\w+)>([0-9]*)<\/\1>/;
const ratio = total / count / 2;
