int midpoint(int lo, int hi)
{
    if (lo > hi)
        return -1;
    int avg = (lo + hi) / 2;
    return avg;
}
