int table[10];

int store(int idx, int value)
{
    if (idx < 0 || idx > 10)
        return -1;
    table[idx] = value;
    return 0;
}
